#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "skewtower/cli.hpp"
#include "support.hpp"

using namespace skewtower;
using skewtower::support::kind_of;
using skewtower::support::poly;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string sample(const std::string& name) { return read_file(std::string(SKEWTOWER_SAMPLES_DIR) + "/" + name); }

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

/// Same generators and skew data, as a ring-file body without the name line.
std::string body(const RingTower& t) {
  const std::string file = render_ring_file(t);
  return file.substr(file.find('\n'));
}

}  // namespace

TEST(Parser, E1File) {
  const auto t = parse_ring_file(sample("e1.ring"));
  EXPECT_EQ(t->name(), "e1");
  EXPECT_EQ(t->field(), FieldDescriptor::prime(5));
  EXPECT_EQ(generator_names(*t), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(body(*t), body(*build_e1()));
  EXPECT_EQ(poly(t, "y") * poly(t, "x"), poly(t, "x*y + x^2"));
}

TEST(Parser, E4FileMatchesBuilder) {
  const auto t = parse_ring_file(sample("e4.ring"));
  EXPECT_EQ(body(*t), body(*builtin_tower("@e4")));
}

TEST(Parser, SamplesMatchBuiltins) {
  for (const char* name : {"e2", "e3", "e5", "e6"}) {
    const auto t = parse_ring_file(sample(std::string(name) + ".ring"));
    EXPECT_EQ(body(*t), body(*builtin_tower(std::string("@") + name))) << name;
  }
}

TEST(Parser, RationalSample) {
  const auto t = parse_ring_file(sample("rational.ring"));
  EXPECT_FALSE(t->field().is_prime_field());
  EXPECT_EQ(t->precision(), 6);
  EXPECT_EQ(t->name(), "rational-example");
  EXPECT_EQ(poly(t, "y") * poly(t, "x"), poly(t, "x*y + 1/2*x^2"));
}

TEST(Parser, PrecisionOverride) {
  EXPECT_EQ(parse_ring_file(sample("e4.ring"), 5)->precision(), 5);
}

TEST(Parser, UseBeforeDeclaration) {
  const std::string text = "ring bad\nfield fp 5\ngen x delta y = x\ngen y\n";
  EXPECT_EQ(kind_of([&] { parse_ring_file(text); }), ErrorKind::UseBeforeDeclaration);
  EXPECT_EQ(kind_of([] { parse_series(build_e1(), "x*z"); }), ErrorKind::UseBeforeDeclaration);
}

TEST(Parser, SyntaxErrorLocation) {
  const std::string text = "ring bad\nfield fp 5\ngen x\ngen y delta x = x^2 +* x\n";
  try {
    parse_ring_file(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    ASSERT_TRUE(e.where().has_value());
    EXPECT_EQ(e.where()->line, 4);
    EXPECT_EQ(e.where()->column, 22);
    EXPECT_NE(std::string(e.what()).find("line 4, column 22: "), std::string::npos) << e.what();
  }
}

TEST(Parser, Errors) {
  auto parse = [](const std::string& text) { return kind_of([&] { parse_ring_file(text); }); };
  EXPECT_EQ(parse("ring r\nfield fp 6\ngen x\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse("ring r\nfield fp 5\ngen x\ngen x\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse("ring r\nfield fp 5\ngen x\ngen y delta x = x^2 delta x = x^3\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse("ring r\nfield fp 5\ngen x\ngen y delta x = x\n"), ErrorKind::ValidationError);
  EXPECT_EQ(parse("ring r\nfield fp 5\ngen x\ngen y sigma x = 1/0*x\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(parse("ring r\nfrobnicate\n"), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_series(build_e1(), "x^-1"); }), ErrorKind::SyntaxError);
}

TEST(Parser, Expressions) {
  const auto t = build_e1();
  EXPECT_EQ(poly(t, "(1 + x)^-1"), series_inverse(poly(t, "1 + x")));
  EXPECT_EQ(poly(t, "-x + 2*x"), poly(t, "x"));
  EXPECT_EQ(poly(t, "x/2"), poly(t, "3*x"));
  EXPECT_EQ(poly(t, "x^2 + O(5)").precision(), 5);
  EXPECT_EQ(poly(t, "y*x  # trailing comment"), poly(t, "x*y + x^2"));
}

TEST(Render, Examples) {
  const auto t = build_e1();
  EXPECT_EQ(render_series(poly(t, "3*x^2*y + x + 1")), "1 + x + 3*x^2*y + O(8)");
  EXPECT_EQ(render_series(Series::zero(t)), "0 + O(8)");
  EXPECT_EQ(render_series(poly(t, "y*x")), "x^2 + x*y + O(8)");
  const auto q = parse_ring_file(sample("rational.ring"));
  EXPECT_EQ(render_series(poly(q, "x - x^2/3")), "x - 1/3*x^2 + O(6)");
  EXPECT_EQ(render_monomial(Monomial(), {"x"}), "1");
}

TEST(Render, RandomRoundTrips) {
  std::mt19937_64 rng(47);
  auto towers = support::example_towers(8);
  towers.push_back(parse_ring_file(sample("rational.ring")));
  for (const auto& t : towers) {
    for (int i = 0; i < 100; ++i) {
      const Series a = support::random_series(t, t->precision(), rng);
      EXPECT_EQ(parse_series(t, render_series(a)), a) << render_series(a);
    }
  }
}

TEST(Render, RingFileRoundTrips) {
  for (const auto& name : builtin_names()) {
    const auto t = builtin_tower(name);
    const auto back = parse_ring_file(render_ring_file(*t));
    EXPECT_EQ(render_ring_file(*back), render_ring_file(*t)) << name;
  }
  const auto windowed = TowerBuilder("w", FieldDescriptor::prime(3)).build();
  EXPECT_EQ(render_ring_file(*windowed), "ring w\nfield fp 3\nprecision 8\n");
}

TEST(Render, PresentationClause) {
  const std::string text = "ring w\nfield fp 3\nprecision 8\ngen x\ngen y\ngen z\npresentation 2 1\n";
  const auto t = parse_ring_file(text);
  EXPECT_EQ(t->presentation().block_sizes, (std::vector<int>{2, 1}));
  EXPECT_EQ(render_ring_file(*t), text);
}

TEST(Report, GoldenJson) {
  for (const char* name : {"e1", "e2", "e3", "e4", "e5", "e6"}) {
    const std::string golden = read_file(std::string(SKEWTOWER_GOLDEN_DIR) + "/" + name + ".json");
    ASSERT_FALSE(golden.empty()) << name;
    const Json expected = Json::parse(golden);
    EXPECT_EQ(full_report(builtin_tower(std::string("@") + name)), expected) << name;
    const auto cli = run_cli({"report", std::string("@") + name, "--json"});
    EXPECT_EQ(cli.code, kExitOk);
    EXPECT_EQ(Json::parse(cli.out), expected) << name;
  }
}

TEST(Report, TextMentionsVerdict) {
  const auto r = run_cli({"report", "@e3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("NOT_RIGID_CERTIFIED"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"validate", "@e1"}).code, kExitOk);
  EXPECT_EQ(run_cli({"stability", "@e3"}).code, kExitOk);
  EXPECT_EQ(run_cli({"obstruct", "@e3"}).code, kExitOk);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitParse);
  EXPECT_EQ(run_cli({"validate", "@nope"}).code, kExitPrecondition);
  EXPECT_EQ(run_cli({"validate", "/nonexistent/file.ring"}).code, kExitParse);
  EXPECT_EQ(run_cli({"eval", "@e1", "--expr", "x +"}).code, kExitParse);
  EXPECT_EQ(run_cli({"quotient", "@e3", "--stage", "1"}).code, kExitPrecondition);
  EXPECT_EQ(run_cli({"quotient", "@e1", "--top"}).code, kExitPrecondition);
  EXPECT_EQ(run_cli({"gr", "@e1", "--filtration", "f"}).code, kExitOk);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST(Cli, ValidationFailureExitCode) {
  const std::string path = ::testing::TempDir() + "/bad.ring";
  std::ofstream(path) << "ring bad\nfield fp 5\ngen x\ngen y sigma x = 1 + x\n";
  const auto r = run_cli({"validate", path});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, EvalAndQuotient) {
  const auto e = run_cli({"eval", "@e1", "--expr", "y*x"});
  EXPECT_EQ(e.out, "x^2 + x*y + O(8)\n");
  const auto j = Json::parse(run_cli({"eval", "@e1", "--expr", "y*x", "--json"}).out);
  EXPECT_EQ(j["valuation"], 2);
  EXPECT_EQ(j["valuation_f"], 3);
  const auto q = run_cli({"quotient", "@e2", "--stage", "1"});
  EXPECT_EQ(q.code, kExitOk);
  EXPECT_NE(q.out.find("gen x2\n"), std::string::npos) << q.out;
}

TEST(Cli, PrecisionFlag) {
  const auto j = Json::parse(run_cli({"validate", "@e1", "--precision", "5", "--json"}).out);
  EXPECT_EQ(j["precision"], 5);
  EXPECT_EQ(run_cli({"validate", "@e1", "--precision", "0"}).code, kExitParse);
}
