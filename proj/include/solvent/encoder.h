#pragma once

#include <map>
#include <string>
#include <vector>

#include "solvent/ast.h"
#include "solvent/smt.h"

namespace solvent {

enum class Logic { LinearArrays, NonlinearArrays };

std::string to_string(Logic l);

/// NonlinearArrays iff some product has two non-constant factors or some
/// division has a non-constant divisor, anywhere in the contract or property.
Logic select_logic(const Contract &c, const Property *p = nullptr);

/// Solver terms for one blockchain state. At frame level these are declared
/// constants (`f3.owner`, `f3$bal`, ...); inside the encoder they are
/// arbitrary terms.
struct SymState {
  std::map<std::string, std::string> vars;  // scalars and mapping arrays
  std::string balance;
  std::string accounts;
  std::string block;
};

/// Transaction variables of one step. Parameters are laid out in two padded
/// slot pools, one for Int-sorted values (numbers and addresses) and one for
/// Bool-sorted values.
struct TxVars {
  std::string selector;
  std::string sender;
  std::string value;
  std::string block;
  std::vector<std::string> int_args;
  std::vector<std::string> bool_args;
};

enum class DecodeField {
  Selector,
  IntArg,
  BoolArg,
  Sender,
  Value,
  Block,
  QVar,
  FrameVar,
  FrameBalance,
  FrameBlock,
  GenesisAccount,  // balance of the address held by `ref` before deployment
};

struct DecodeEntry {
  std::string term;
  DecodeField field = DecodeField::Selector;
  int step = -1;  // transaction index (0 = constructor) or frame index
  int slot = -1;
  std::string name;  // FrameVar / QVar
  std::string ref;   // GenesisAccount: term of the address
};

enum class QueryKind { Bmc, Abstract, InductiveInit, InductiveStep, Custom };

std::string to_string(QueryKind k);

struct EncodedQuery {
  QueryKind kind = QueryKind::Custom;
  std::string property;
  int depth = 0;
  std::string script;
  Logic logic = Logic::LinearArrays;
  std::vector<DecodeEntry> decode_map;
};

/// Accumulates SMT-LIB commands for one self-contained script.
class ScriptBuilder {
 public:
  ScriptBuilder();
  void declare(const std::string &name, const std::string &sort);
  void add(const std::string &command);
  void assert_term(const std::string &term);
  void absorb(const smt::Binder &b);
  /// Appends check-sat and, when non-empty, get-value over `terms`.
  std::string finish(const std::vector<std::string> &terms) const;
  std::string text() const;

 private:
  std::vector<std::string> lines_;
};

/// Result of unrolling the constructor and k-1 transitions.
struct Prefix {
  std::vector<SymState> frames;  // frames[0] is the post-constructor state
  std::vector<TxVars> txs;       // txs[0] is the constructor transaction
  std::string genesis_accounts;
};

class Encoder {
 public:
  explicit Encoder(const Contract &c);

  const Contract &contract() const { return c_; }

  int selfdestruct_tag() const { return static_cast<int>(c_.methods.size()); }
  int skip_tag() const { return selfdestruct_tag() + 1; }
  std::size_t int_slots() const { return int_slots_; }
  std::size_t bool_slots() const { return bool_slots_; }
  /// slot of parameter `i` of `m`: (is_bool, index in that pool)
  std::pair<bool, std::size_t> slot_of(const Method &m, std::size_t i) const;

  static std::string sort_of(const Ty &ty);

  SymState frame_names(const std::string &prefix) const;
  /// Slot pools are sized for the methods, or for the constructor when `ctor`.
  TxVars tx_names(const std::string &prefix, bool ctor = false) const;
  void declare_frame(ScriptBuilder &s, const SymState &f) const;
  void declare_tx(ScriptBuilder &s, const TxVars &t) const;
  std::vector<std::pair<std::string, std::string>> tx_bindings(
      const TxVars &t, bool with_sender) const;

  // Relational forms. Each returns a closed formula over the given names.
  std::string encode_method(const Method &m, const SymState &pre,
                            const TxVars &tx, const SymState &post);
  std::string encode_transition(const SymState &pre, const TxVars &tx,
                                const SymState &post, bool allow_skip);
  std::string encode_init(const SymState &frame0, const TxVars &ctor,
                          const std::string &genesis_accounts);
  /// Antecedent at `reached` conjoined with the universally quantified
  /// suffix block. Binders are the free constants `qvar_terms`.
  std::string encode_negated_property(
      const Property &p, const SymState &reached,
      const std::map<std::string, std::string> &qvar_terms);

  /// Environment constraints on one step: non-negative value, sender can
  /// pay, block does not go back, selector in range, typed arguments.
  std::string env_constraint(const SymState &pre, const TxVars &tx,
                             bool allow_skip) const;

  /// Post-state terms of one transition (functional form). When `revert` is
  /// given it receives the condition under which the selected method reverts.
  SymState transition_post(const SymState &pre, const TxVars &tx,
                           bool allow_skip, smt::Binder &b,
                           std::string *revert = nullptr);
  /// Post-state of a method body plus its revert condition.
  /// `credited` is the pre-state after the value prologue, if already built.
  SymState method_post(const Method &m, const SymState &pre, const TxVars &tx,
                       smt::Binder &b, std::string *revert,
                       const SymState *credited = nullptr);

  /// Declares and constrains frames 0..k-1 and their transactions. Prefix
  /// transactions are required not to revert.
  Prefix encode_prefix(ScriptBuilder &s, int k);

  /// Translates an expression; `post` resolves `<tx>` subterms.
  std::string translate(const ExprPtr &e, const SymState &cur,
                        const SymState *post, const TxVars *tx,
                        const Method *method,
                        const std::map<std::string, std::string> *qvars,
                        smt::Binder &b);

  std::string structural_invariants(const SymState &f) const;

 private:
  const Contract &c_;
  std::size_t int_slots_ = 0;
  std::size_t bool_slots_ = 0;
  std::size_t ctor_int_slots_ = 0;
  std::size_t ctor_bool_slots_ = 0;
  int counter_ = 0;

  struct ExprCtx;
  std::string tr(const ExprPtr &e, const ExprCtx &ctx, const std::string &path,
                 std::vector<std::string> *zero_divs, smt::Binder &b);
  void encode_block(const Block &body, SymState &st, std::string &revert,
                    const ExprCtx &ctx, smt::Binder &b);
  SymState credit(const SymState &pre, const TxVars &tx, smt::Binder &b) const;
  std::string frame_equal(const SymState &a, const SymState &b) const;
};

std::string smt_frame_value(const std::map<Int, Int> &m);

EncodedQuery build_bmc_query(const Contract &c, const Property &p, int k);
EncodedQuery build_abstract_query(const Contract &c, const Property &p,
                                  const std::vector<ExprPtr> &extra_invariants);
/// Queries whose unsatisfiability shows that `invariants` hold after the
/// constructor and are preserved by every transition.
EncodedQuery build_invariant_init_query(const Contract &c,
                                        const std::vector<ExprPtr> &invariants);
EncodedQuery build_invariant_step_query(const Contract &c,
                                        const std::vector<ExprPtr> &invariants);

}  // namespace solvent
