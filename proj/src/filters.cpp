#include "ctm/filters.hpp"

namespace ctm {

bool static_no_halt(const MachineSpec& machine) {
  return !machine.has_halting_entry();
}

}  // namespace ctm
