#pragma once

// A small register machine with a fixed Goedel numbering, its staged halting
// approximation K_s, the point-pair class {h_{s,e} : e in K_s}, and the
// reduction that reads membership in K_s off a proper ERM learner.
//
// Instruction set (registers start at zero, execution starts at 0):
//   INC r       r += 1, continue
//   DECJZ r l   if r == 0 jump to l, else r -= 1 and continue
//   HALT        stop
// Each executed instruction is one step. Reaching pc == length also halts,
// counted at the step that moved pc there.
//
// Numbering:
//   pair(a, b)      = (a + b)(a + b + 1)/2 + b            (Cantor)
//   code(HALT)      = 0
//   code(INC r)     = 3r + 1
//   code(DECJZ r l) = 3 pair(r, l) + 2
//   list([c])       = 2c
//   list(c :: rest) = 2 pair(c, list(rest)) + 1
// list is a bijection between N and nonempty lists of N, so every natural
// decodes to an instruction list. A list that is not a valid program (a HALT
// code with a nonzero payload, a register >= R, or a jump past the end)
// decodes to the program [HALT], whose number is 0.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/integer.hpp>

#include "cpac/classes.hpp"
#include "cpac/learners.hpp"

namespace cpac {

enum class Opcode : std::uint8_t { halt, inc, decjz };

struct Instruction {
  Opcode op = Opcode::halt;
  std::uint32_t reg = 0;
  std::uint32_t target = 0;

  static Instruction halt() { return {}; }
  static Instruction inc(std::uint32_t r) { return {Opcode::inc, r, 0}; }
  static Instruction decjz(std::uint32_t r, std::uint32_t l) { return {Opcode::decjz, r, l}; }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

inline constexpr std::uint32_t kDefaultRegisters = 4;

class MachineProgram {
 public:
  explicit MachineProgram(std::vector<Instruction> instructions, std::uint32_t registers = kDefaultRegisters)
      : instructions_(std::move(instructions)), registers_(registers) {
    if (const auto why = invalid_reason(instructions_, registers_)) throw DomainError(*why);
  }

  static std::optional<std::string> invalid_reason(const std::vector<Instruction>& code, std::uint32_t registers) {
    if (code.empty()) return "a program needs at least one instruction";
    for (const auto& ins : code) {
      if (ins.op != Opcode::halt && ins.reg >= registers)
        return "register " + std::to_string(ins.reg) + " out of range";
      if (ins.op == Opcode::decjz && ins.target > code.size())
        return "jump target " + std::to_string(ins.target) + " past the end";
    }
    return std::nullopt;
  }

  const std::vector<Instruction>& instructions() const { return instructions_; }
  std::uint32_t registers() const { return registers_; }

  friend bool operator==(const MachineProgram&, const MachineProgram&) = default;

 private:
  std::vector<Instruction> instructions_;
  std::uint32_t registers_;
};

// ---- numbering ------------------------------------------------------------

inline BigInt cantor_pair(const BigInt& a, const BigInt& b) { return (a + b) * (a + b + 1) / 2 + b; }

inline std::pair<BigInt, BigInt> cantor_unpair(const BigInt& z) {
  // w = floor((sqrt(8z + 1) - 1) / 2)
  const BigInt w = (boost::multiprecision::sqrt(BigInt(8 * z + 1)) - 1) / 2;
  const BigInt t = w * (w + 1) / 2;
  const BigInt b = z - t;
  return {w - b, b};
}

inline BigInt encode(const MachineProgram& p) {
  const auto& code = p.instructions();
  BigInt acc;
  for (std::size_t i = code.size(); i-- > 0;) {
    const auto& ins = code[i];
    BigInt c;
    switch (ins.op) {
      case Opcode::halt:
        c = 0;
        break;
      case Opcode::inc:
        c = 3 * BigInt(ins.reg) + 1;
        break;
      case Opcode::decjz:
        c = 3 * cantor_pair(ins.reg, ins.target) + 2;
        break;
    }
    acc = i + 1 == code.size() ? BigInt(2 * c) : BigInt(2 * cantor_pair(c, acc) + 1);
  }
  return acc;
}

// Total: invalid instruction lists decode to [HALT].
inline MachineProgram decode(BigInt n, std::uint32_t registers = kDefaultRegisters) {
  const MachineProgram fallback({Instruction::halt()}, registers);
  std::vector<BigInt> codes;
  for (;;) {
    if (n % 2 == 0) {
      codes.push_back(n / 2);
      break;
    }
    auto [head, rest] = cantor_unpair((n - 1) / 2);
    codes.push_back(std::move(head));
    n = std::move(rest);
  }
  const BigInt length = codes.size();
  std::vector<Instruction> program;
  program.reserve(codes.size());
  for (const auto& c : codes) {
    const BigInt payload = c / 3;
    switch (static_cast<int>(c % 3)) {
      case 0:
        if (payload != 0) return fallback;
        program.push_back(Instruction::halt());
        break;
      case 1:
        if (payload >= registers) return fallback;
        program.push_back(Instruction::inc(payload.convert_to<std::uint32_t>()));
        break;
      default: {
        const auto [r, l] = cantor_unpair(payload);
        if (r >= registers || l > length) return fallback;
        program.push_back(Instruction::decjz(r.convert_to<std::uint32_t>(), l.convert_to<std::uint32_t>()));
        break;
      }
    }
  }
  return MachineProgram(std::move(program), registers);
}

// ---- execution ------------------------------------------------------------

struct RunOutcome {
  bool halted = false;
  // Steps executed: the halting step if halted, else the budget.
  std::uint64_t steps = 0;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

inline RunOutcome run_bounded(const MachineProgram& p, std::uint64_t budget) {
  const auto& code = p.instructions();
  std::vector<std::uint64_t> reg(p.registers(), 0);
  std::size_t pc = 0;
  for (std::uint64_t step = 1; step <= budget; ++step) {
    const auto& ins = code[pc];
    switch (ins.op) {
      case Opcode::halt:
        return {true, step};
      case Opcode::inc:
        ++reg[ins.reg];
        ++pc;
        break;
      case Opcode::decjz:
        if (reg[ins.reg] == 0) {
          pc = ins.target;
        } else {
          --reg[ins.reg];
          ++pc;
        }
        break;
    }
    if (pc == code.size()) return {true, step};
  }
  return {false, budget};
}

inline RunOutcome run_bounded(std::uint64_t e, std::uint64_t budget) { return run_bounded(decode(BigInt(e)), budget); }

// halted[e] is the least s <= budget with e in K_s, if any.
class HaltingTable {
 public:
  HaltingTable(std::uint64_t budget, std::vector<std::optional<std::uint64_t>> halted)
      : budget_(budget), halted_(std::move(halted)) {}

  std::uint64_t budget() const { return budget_; }
  std::uint64_t max_index() const { return halted_.size(); }
  const std::optional<std::uint64_t>& halt_step(std::uint64_t e) const { return halted_.at(e); }

  // e in K_s, for s <= budget.
  bool in_k(std::uint64_t e, std::uint64_t s) const {
    const auto& h = halted_.at(e);
    return h && *h <= s;
  }

 private:
  std::uint64_t budget_;
  std::vector<std::optional<std::uint64_t>> halted_;
};

inline HaltingTable halting_approx(std::uint64_t max_index, std::uint64_t budget) {
  std::vector<std::optional<std::uint64_t>> halted(max_index);
  for (std::uint64_t e = 0; e < max_index; ++e)
    if (const auto r = run_bounded(e, budget); r.halted) halted[e] = r.steps;
  return HaltingTable(budget, std::move(halted));
}

inline std::uint64_t counterexample_window(std::uint64_t max_index, std::uint64_t budget) {
  return std::max(2 * max_index, 2 * budget + 1) + 1;
}

// {h_{s,e} : e < max_index, s <= budget, e in K_s}, in lexicographic (s, e) order.
inline EnumeratedClass build_counterexample_class(const HaltingTable& k, std::uint64_t window) {
  if (2 * k.max_index() >= window || 2 * k.budget() + 1 >= window)
    throw DomainError("window " + std::to_string(window) + " too small for the point-pair class");
  std::vector<Hypothesis> members;
  for (std::uint64_t s = 0; s <= k.budget(); ++s)
    for (std::uint64_t e = 0; e < k.max_index(); ++e)
      if (k.in_k(e, s)) members.push_back(point_pair_hypothesis(s, e, window));
  return EnumeratedClass::from_list(window, std::move(members));
}

inline EnumeratedClass build_counterexample_class(std::uint64_t max_index, std::uint64_t budget, std::uint64_t window) {
  return build_counterexample_class(halting_approx(max_index, budget), window);
}

// Feeds ((2e, 1)) x m to the learner and reports whether its output labels 2e with 1.
inline bool decide_via_learner(const Learner& a, std::uint64_t e, std::size_t m) {
  if (m < 1) throw DomainError("the reduction needs at least one sample pair");
  const Sample s(m, Example{Point{2 * e}, Label::one});
  return a(s)(Point{2 * e}) == Label::one;
}

// ---- program text -----------------------------------------------------------

inline MachineProgram read_program(std::istream& in, std::uint32_t registers = kDefaultRegisters) {
  std::vector<Instruction> code;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string op;
    words >> op;
    std::vector<std::string> args;
    for (std::string a; words >> a;) args.push_back(a);
    const auto arg = [&](std::size_t i) {
      return static_cast<std::uint32_t>(detail::parse_natural(args.at(i)));
    };
    if (op == "HALT" && args.empty())
      code.push_back(Instruction::halt());
    else if (op == "INC" && args.size() == 1)
      code.push_back(Instruction::inc(arg(0)));
    else if (op == "DECJZ" && args.size() == 2)
      code.push_back(Instruction::decjz(arg(0), arg(1)));
    else
      throw ParseError("bad instruction: '" + line + "'");
  }
  try {
    return MachineProgram(std::move(code), registers);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline void write_program(std::ostream& out, const MachineProgram& p) {
  for (const auto& ins : p.instructions()) {
    switch (ins.op) {
      case Opcode::halt:
        out << "HALT\n";
        break;
      case Opcode::inc:
        out << "INC " << ins.reg << '\n';
        break;
      case Opcode::decjz:
        out << "DECJZ " << ins.reg << ' ' << ins.target << '\n';
        break;
    }
  }
}

}  // namespace cpac
