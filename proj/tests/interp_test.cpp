#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "gen.h"
#include "solvent/interp.h"
#include "solvent/parser.h"

using namespace solvent;

namespace {

SourceUnit load(const std::string &name)
{
  std::ifstream in(std::string(SOLVENT_BENCH_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  auto p = parse_file(ss.str());
  if (!p.ok()) throw std::runtime_error("cannot parse " + name);
  return *p.value;
}

Transaction call(const std::string &m, std::vector<Value> args, int sender, int value, int block)
{
  return {TxKind::Call, m, std::move(args), sender, value, block};
}

// ctor(owner=1, end_donate=10, target=4); donate 2; selfdestruct 3
std::vector<Transaction> crowdfund_trace()
{
  return {{TxKind::Constructor, "", {Address{1}, Int(10), Int(4)}, 0, 0, 0},
          call("donate", {}, 0, 2, 1),
          {TxKind::Selfdestruct, "", {}, 1, 3, 2}};
}

const std::map<Int, Int> kAccounts{{0, 5}, {1, 3}, {2, 4}};

}  // namespace

TEST(Interp, GenesisState)
{
  SourceUnit u = load("crowdfund_bug.sol");
  ConcreteState s = genesis_state(u.contract, kAccounts, 7);
  EXPECT_FALSE(s.deployed);
  EXPECT_EQ(s.block_number, 7);
  EXPECT_EQ(s.contract_balance, 0);
  EXPECT_EQ(std::get<bool>(s.scalars.at("target_reached")), false);
  EXPECT_EQ(s.account(2), 4);
  EXPECT_EQ(s.account(9), 0);
  EXPECT_EQ(s.total_funds(), 12);
}

TEST(Interp, CrowdfundTrace)
{
  SourceUnit u = load("crowdfund_bug.sol");
  auto out = run_trace(u.contract, crowdfund_trace(), kAccounts);
  ASSERT_EQ(out.size(), 3u);
  for (const auto &o : out) EXPECT_FALSE(o.reverted);
  const ConcreteState &s = out.back().next;
  EXPECT_EQ(std::get<Address>(s.scalars.at("owner")).v, 1);
  EXPECT_EQ(s.map_get("donors", 0), 2);
  EXPECT_EQ(s.contract_balance, 5);
  EXPECT_EQ(s.account(0), 3);
  EXPECT_EQ(s.account(1), 0);
  EXPECT_EQ(std::get<bool>(s.scalars.at("target_reached")), false);
  EXPECT_EQ(s.block_number, 2);
}

TEST(Interp, PublishedCounterexample)
{
  SourceUnit u = load("crowdfund_bug.sol");
  const Contract &c = u.contract;
  std::map<Int, Int> acc{{0, 1}, {4, 1}};
  auto out = run_trace(c,
                       {{TxKind::Constructor, "", {Address{2}, Int(0), Int(2)}, 4, 0, 0},
                        call("donate", {}, 4, 1, 0),
                        {TxKind::Selfdestruct, "", {}, 0, 1, 0}},
                       acc);
  for (const auto &o : out) EXPECT_FALSE(o.reverted);
  EXPECT_EQ(out[1].next.map_get("donors", 4), 1);
  EXPECT_EQ(out[1].next.contract_balance, 1);
  const ConcreteState &s = out[2].next;
  EXPECT_EQ(s.contract_balance, 2);
  EXPECT_EQ(s.account(0), 0);
  EXPECT_EQ(s.scalars, out[1].next.scalars);
  EXPECT_EQ(s.mappings, out[1].next.mappings);

  // donating after the deadline reverts
  auto late = run_trace(c,
                        {{TxKind::Constructor, "", {Address{2}, Int(0), Int(2)}, 4, 0, 0},
                         call("donate", {}, 4, 1, 1)},
                        acc);
  EXPECT_TRUE(late.back().reverted);
  EXPECT_EQ(late.back().next.contract_balance, 0);
}

TEST(Interp, RequireFailureReverts)
{
  SourceUnit u = load("crowdfund_bug.sol");
  auto tr = crowdfund_trace();
  tr.push_back(call("wdDonor", {}, 0, 0, 11));  // balance 5 >= target 4
  auto out = run_trace(u.contract, tr, kAccounts);
  EXPECT_TRUE(out.back().reverted);
  ConcreteState expect = out[2].next;
  expect.block_number = 11;
  EXPECT_EQ(out.back().next, expect);
}

TEST(Interp, TransferMovesFunds)
{
  SourceUnit u = load("bank.sol");
  std::vector<Transaction> tr{{TxKind::Constructor, "", {}, 0, 0, 0},
                              call("deposit", {}, 2, 3, 1),
                              call("withdraw", {Int(2)}, 2, 0, 2)};
  auto out = run_trace(u.contract, tr, kAccounts);
  const ConcreteState &s = out.back().next;
  EXPECT_EQ(s.map_get("credits", 2), 1);
  EXPECT_EQ(s.contract_balance, 1);
  EXPECT_EQ(s.account(2), 3);
}

TEST(Interp, NonPayableWithValueReverts)
{
  SourceUnit u = load("bank.sol");
  std::vector<Transaction> tr{{TxKind::Constructor, "", {}, 0, 0, 0},
                              call("withdraw", {Int(1)}, 2, 1, 1)};
  auto out = run_trace(u.contract, tr, kAccounts);
  EXPECT_TRUE(out.back().reverted);
  EXPECT_EQ(out.back().next.account(2), 4);
}

TEST(Interp, PreconditionErrors)
{
  SourceUnit u = load("bank.sol");
  const Contract &c = u.contract;
  ConcreteState g = genesis_state(c, kAccounts, 5);
  EXPECT_THROW(apply_tx(c, g, call("deposit", {}, 0, 0, 5)), InterpError);
  ConcreteState s = apply_tx(c, g, {TxKind::Constructor, "", {}, 0, 0, 5}).next;
  EXPECT_THROW(apply_tx(c, s, {TxKind::Constructor, "", {}, 0, 0, 5}), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("deposit", {}, 0, 0, 4)), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("deposit", {}, 0, 6, 5)), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("nope", {}, 0, 0, 5)), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("withdraw", {}, 0, 0, 5)), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("withdraw", {Int(-1)}, 0, 0, 5)), InterpError);
  EXPECT_THROW(apply_tx(c, s, call("withdraw", {true}, 0, 0, 5)), InterpError);
  EXPECT_THROW(run_trace(c, {call("deposit", {}, 0, 0, 5)}, kAccounts), InterpError);
}

TEST(Interp, PropertyEvaluation)
{
  SourceUnit u = load("crowdfund_bug.sol");
  const Contract &c = u.contract;
  const Property &p = *u.find_property("donor_wd");
  auto out = run_trace(c, crowdfund_trace(), kAccounts);
  ConcreteState s = out.back().next;
  QEnv env{{"xa", 0}};
  EXPECT_EQ(std::get<bool>(eval_pre(c, s, p.antecedent, env)), false);  // block 2 <= 10
  s.block_number = 11;
  EXPECT_EQ(std::get<bool>(eval_pre(c, s, p.antecedent, env)), true);
  ConcreteState post = s;
  post.set_account(0, s.account(0) + 2);
  EXPECT_EQ(std::get<bool>(eval_post(c, s, post, p.consequent, env)), true);
  EXPECT_EQ(std::get<bool>(eval_post(c, s, s, p.consequent, env)), false);
}

TEST(Bruteforce, CrowdfundDonorIsStuck)
{
  SourceUnit u = load("crowdfund_bug.sol");
  const Contract &c = u.contract;
  const Property &p = *u.find_property("donor_wd");
  ConcreteState s = run_trace(c, crowdfund_trace(), kAccounts).back().next;
  s.block_number = 11;
  EXPECT_FALSE(bruteforce_liquid(c, s, p, {{"xa", 0}}, FiniteDomains{}));
  // without the injection the donor gets the funds back
  ConcreteState t = run_trace(c, {crowdfund_trace()[0], crowdfund_trace()[1]}, kAccounts).back().next;
  t.block_number = 11;
  auto w = find_liquidating_suffix(c, t, p, {{"xa", 0}}, FiniteDomains{});
  ASSERT_TRUE(w.found);
  ASSERT_EQ(w.suffix.size(), 1u);
  EXPECT_EQ(w.suffix[0].method, "wdDonor");
  EXPECT_EQ(w.suffix[0].sender, 0);
}

TEST(Bruteforce, BankWithdrawNeedsArgument)
{
  SourceUnit u = load("bank.sol");
  const Contract &c = u.contract;
  std::vector<Transaction> tr{{TxKind::Constructor, "", {}, 0, 0, 0},
                              call("deposit", {}, 2, 3, 1)};
  ConcreteState s = run_trace(c, tr, kAccounts).back().next;
  const Property &p = *u.find_property("user_wd");
  auto w = find_liquidating_suffix(c, s, p, {{"xa", 2}}, FiniteDomains{});
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.suffix[0].args, std::vector<Value>{Int(3)});
  FiniteDomains small;
  small.values = {0, 1};
  EXPECT_FALSE(bruteforce_liquid(c, s, p, {{"xa", 2}}, small));
}

TEST(Bruteforce, TraceLimit)
{
  SourceUnit u = load("bank.sol");
  const Contract &c = u.contract;
  std::vector<Transaction> tr{{TxKind::Constructor, "", {}, 0, 0, 0},
                              call("deposit", {}, 0, 3, 1)};
  ConcreteState s = run_trace(c, tr, kAccounts).back().next;
  Property p = *u.find_property("wd_all");
  p.bound_m = 3;
  FiniteDomains dom;
  dom.max_traces = 10;
  EXPECT_THROW(find_liquidating_suffix(c, s, p, {{"xa", 2}}, dom), InterpError);
}

TEST(FiniteDomains, Parse)
{
  auto d = FiniteDomains::parse("values=0,1,2;addresses=0-5;blocks=0,1,1000;max=100000");
  EXPECT_EQ(d.values, (std::vector<Int>{0, 1, 2}));
  EXPECT_EQ(d.addresses.size(), 6u);
  EXPECT_EQ(d.block_offsets, (std::vector<Int>{0, 1, 1000}));
  EXPECT_EQ(d.max_traces, 100000u);
  EXPECT_THROW(FiniteDomains::parse("values=a"), SolventError);
  EXPECT_THROW(FiniteDomains::parse("colors=1"), SolventError);
}

TEST(TraceText, FormatAndParse)
{
  SourceUnit u = load("crowdfund_bug.sol");
  auto tr = crowdfund_trace();
  tr.push_back(call("wdDonor", {}, 0, 0, 1000000));
  std::string text = format_trace(tr);
  EXPECT_NE(text.find("[1] constructor(1,10,4)"), std::string::npos) << text;
  EXPECT_NE(text.find("selfdestruct()"), std::string::npos);
  EXPECT_NE(text.find("msg.sender=address(1)  msg.value=3  block=2"), std::string::npos);
  auto back = parse_trace(u.contract, text);
  ASSERT_TRUE(back.ok()) << back.diagnostics[0].message;
  EXPECT_EQ(*back.value, tr);
}

TEST(TraceText, RandomRoundTrip)
{
  testgen::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    Contract c = testgen::random_contract(rng);
    std::vector<Transaction> tr;
    if (!testgen::random_trace(c, testgen::random_accounts(rng), 5, rng, tr)) continue;
    auto back = parse_trace(c, format_trace(tr));
    ASSERT_TRUE(back.ok()) << format_trace(tr);
    EXPECT_EQ(*back.value, tr);
  }
}

TEST(Invariants, RandomTransactions)
{
  auto st = testgen::check_interp_invariants(100000, 2024);
  EXPECT_GE(st.transactions, 100000u);
  EXPECT_GT(st.reverts, 0u);
  EXPECT_EQ(st.failures, 0u) << (st.messages.empty() ? "" : st.messages[0]);
}
