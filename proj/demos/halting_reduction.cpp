// Builds {h_{s,e} : e in K_s} for the first programs, trains exact ERM on
// ((2e, 1))^m and compares what the learner says with direct simulation.

#include <iostream>

#include "cpac/cpac.hpp"

int main() {
  constexpr std::uint64_t kPrograms = 16;
  constexpr std::uint64_t kBudget = 64;

  const auto table = cpac::halting_approx(kPrograms, kBudget);
  const auto cls = cpac::build_counterexample_class(table, cpac::counterexample_window(kPrograms, kBudget));
  const auto learner = cpac::erm_enumerated(cls);

  std::cout << "class size " << cpac::enumerate(cls).size() << ", VC dimension "
            << cpac::vc_dimension(cls, cls.window(), 3).dimension << "\n\n";
  for (std::uint64_t e = 0; e < kPrograms; ++e) {
    const auto program = cpac::decode(cpac::BigInt(e));
    const bool says = cpac::decide_via_learner(learner, e, 5);
    std::cout << "e=" << e << "  halts-by-" << kBudget << "=" << table.in_k(e, kBudget) << "  learner=" << says
              << "  program:";
    for (const auto& ins : program.instructions()) {
      switch (ins.op) {
        case cpac::Opcode::halt: std::cout << " HALT;"; break;
        case cpac::Opcode::inc: std::cout << " INC " << ins.reg << ';'; break;
        case cpac::Opcode::decjz: std::cout << " DECJZ " << ins.reg << ' ' << ins.target << ';'; break;
      }
    }
    std::cout << '\n';
  }
}
