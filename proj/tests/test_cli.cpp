#include <gtest/gtest.h>

#include <sstream>

#include "ccs_cli.hpp"
#include "test_support.hpp"

using namespace ccs;
using tst::data_path;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult ccs_run(std::vector<std::string> args) {
  args.insert(args.begin(), "ccs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, ProvePlain) {
  CliResult r = ccs_run({"prove", data_path("f8.problem")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), std::vector<std::string>{"[3 = 2 (2 (2 (2 (2 (2 (2 (2 1)))))))]"});
}

TEST(Cli, ProveAllWithB) {
  CliResult r = ccs_run({"prove", data_path("f8.problem"), "--combinators", "B", "--all"});
  EXPECT_EQ(r.code, 0);
  auto got = lines(r.out);
  std::set<std::string> have(got.begin(), got.end());
  std::set<std::string> want(tst::f8_b_proofs().begin(), tst::f8_b_proofs().end());
  EXPECT_EQ(have, want);
  EXPECT_EQ(got.size(), 6u);
}

TEST(Cli, ProveSchemasWithOracleCheck) {
  CliResult r = ccs_run({"prove", data_path("f8.problem"), "--schemas", data_path("schemas/f8.cfg"),
                         "--arity-typing", "on", "--all", "--oracle-check"});
  EXPECT_EQ(r.code, 0);
  auto got = lines(r.out);
  std::set<std::string> have(got.begin(), got.end());
  std::set<std::string> want(tst::f8_schema_proofs().begin(), tst::f8_schema_proofs().end());
  EXPECT_EQ(have, want);
  EXPECT_NE(r.err.find("oracle-check: agree (4, 2)"), std::string::npos) << r.err;
}

TEST(Cli, Minimize) {
  CliResult r = ccs_run({"minimize", data_path("f8.problem"), "--combinators", "B"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), std::vector<std::string>{"(6, 6)"});
  CliResult low = ccs_run({"minimize", "fn:8", "--max-size", "4"});
  EXPECT_EQ(low.code, 1);
  EXPECT_EQ(lines(low.out), std::vector<std::string>{"≥ 5"});
}

TEST(Cli, Mgt) {
  CliResult r = ccs_run({"mgt", "D(2,1)", "--problem", data_path("f8.problem")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), std::vector<std::string>{"P(f(a))"});
  CliResult bad = ccs_run({"mgt", "1 1", "--problem", data_path("f8.problem")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(lines(bad.out), std::vector<std::string>{"undefined"});
}

TEST(Cli, Normalize) {
  CliResult r = ccs_run({"normalize", "B 2 2 (B 2 2 1)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), std::vector<std::string>{"[3 = 2 (2 (2 (2 1)))]"});
}

TEST(Cli, Compress) {
  CliResult r = ccs_run({"compress", "2 (2 (2 (2 (2 (2 (2 (2 1)))))))", "--problem", data_path("f8.problem")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[3 = B 2 2, 4 = B 3 3, 5 = 4 (4 1)]"), std::string::npos) << r.out;
  CliResult j = ccs_run({"compress", "2 (2 (2 (2 (2 (2 (2 (2 1)))))))", "--emit", "json"});
  ASSERT_EQ(j.code, 0);
  Json doc = Json::parse(j.out);
  EXPECT_EQ(doc["metrics"]["xc"], 8);
  EXPECT_EQ(doc["metrics"]["lc"], 6);
}

TEST(Cli, Lemmas) {
  CliResult r = ccs_run({"lemmas", "fn:2", "--max-size", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("[3 = 2 (2 1)] : P(f(f(a)))"), std::string::npos) << r.out;
}

TEST(Cli, Oracle) {
  CliResult r = ccs_run({"oracle", "fn:3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).front(), "(3, 1)");
}

TEST(Cli, JsonSearchResult) {
  CliResult r = ccs_run({"prove", "fn:4", "--emit", "json"});
  ASSERT_EQ(r.code, 0);
  Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["format"], "ccs-search-result");
  EXPECT_EQ(doc["min_size"], 4);
}

TEST(Cli, Portfolio) {
  CliResult r = ccs_run({"prove", data_path("f8.problem"), "--arity-typing", "on", "--portfolio",
                         "plain," + data_path("schemas/f8.cfg")});
  EXPECT_EQ(r.code, 0);
  ASSERT_EQ(lines(r.out).size(), 1u);
  std::string got = lines(r.out).front();
  EXPECT_TRUE(got == tst::f8_schema_proofs()[0] || got == tst::f8_schema_proofs()[1]) << got;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(ccs_run({}).code, 2);
  EXPECT_EQ(ccs_run({"--help"}).code, 0);
  EXPECT_EQ(ccs_run({"prove", data_path("tptp/errors/non_horn.p")}).code, 2);
  EXPECT_EQ(ccs_run({"prove", "fn:8", "--max-size", "7"}).code, 1);
  CliResult t = ccs_run({"prove", data_path("tptp/CD007-1.p"), "--timeout", "0.3", "--max-size", "40"});
  EXPECT_EQ(t.code, 3);
  EXPECT_EQ(ccs_run({"prove", "fn:2", "--arity-typing", "maybe"}).code, 2);
}
