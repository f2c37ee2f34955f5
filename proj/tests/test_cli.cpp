#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lasso/cli.hpp"
#include "test_util.hpp"

using namespace lasso;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "lassotool");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lasso-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static std::string read(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    ParityAutomaton load(const std::string& name) const { return hoa::parse(read(path(name))); }

    /// Every written HOA file reads back to an automaton with the same lassos.
    static void expect_round_trip(const ParityAutomaton& a) {
        const auto b = hoa::parse(hoa::write(a));
        for (std::size_t n = 1; n <= 4; ++n)
            enumerate_bases(a.alphabet(), n).for_each([&](const Lasso& w) { ASSERT_EQ(accepts_lasso(a, w), accepts_lasso(b, w)); });
    }

    fs::path dir_;
};

ParityAutomaton three_color() {
    AutomatonBuilder b(Alphabet({"a", "b", "c"}));
    b.add_state("x", 1);
    b.add_state("y", 2);
    b.add_state("z", 3);
    b.add_initial(0);
    for (StateId q = 0; q < 3; ++q)
        for (LetterId l = 0; l < 3; ++l) b.add_transition(q, l, l);
    return b.build();
}

} // namespace

TEST_F(CliTest, ApproximateLtlSafety) {
    const auto r = run({"approximate", "--ltl", "G F p", "--bound", "3", "--target", "safety", "--out", path("a.hoa")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto a = load("a.hoa");
    EXPECT_TRUE(a.is_safety());
    EXPECT_LE(a.size(), 3u * 3 * 3 + 8u * 64);
    EXPECT_NE(r.err.find("state-bound: 539"), std::string::npos);
    const auto phi = ltl::ltl_oracle(ltl::parse("G F p"), ltl::ApLetterMap(std::vector<std::string>{"p"}));
    EXPECT_TRUE(check_lasso_precise(a, phi, 3, 5).passed());
    expect_round_trip(a);
}

TEST_F(CliTest, ApproximateLtlFromFileWithRestrictedAlphabet) {
    const auto f = write("f.ltl", "# comment\n(F G p) &\n(G F q)\n");
    const auto r = run({"approximate", "--ltl-file", f, "--aps", "p,q", "--alphabet", "{p};{p,q}", "--bound", "2",
                        "--out", path("a.hoa")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto a = load("a.hoa");
    EXPECT_EQ(a.alphabet().size(), 2u);
    const auto ck = run({"check", "--in", path("a.hoa"), "--ltl-file", f, "--bound", "2"});
    EXPECT_EQ(ck.code, 0) << ck.out << ck.err;
}

TEST_F(CliTest, ApproximateGfOneBuchiToSafety) {
    write("gf1.hoa", hoa::write(families::gf_one()));
    const auto r = run({"approximate", "--in", path("gf1.hoa"), "--bound", "4", "--target", "safety", "--out", path("s.hoa"),
                        "--dot", path("s.dot")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto s = load("s.hoa");
    EXPECT_LE(s.size(), 5u);
    EXPECT_TRUE(s.is_safety());
    EXPECT_NE(read(path("s.dot")).find("digraph"), std::string::npos);
    const auto ck = run({"check", "--in", path("s.hoa"), "--ref", path("gf1.hoa"), "--bound", "4"});
    EXPECT_EQ(ck.code, 0) << ck.out;
    EXPECT_NE(ck.out.find("exact-inclusion: holds"), std::string::npos);
    expect_round_trip(s);
}

TEST_F(CliTest, ApproximateThreeColorToBuchi) {
    write("threecolor.hoa", hoa::write(three_color()));
    const auto r = run({"approximate", "--in", path("threecolor.hoa"), "--bound", "2", "--target", "parity:2", "--out",
                        path("b.hoa")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto b = load("b.hoa");
    EXPECT_TRUE(b.is_buchi());
    EXPECT_EQ(run({"check", "--in", path("b.hoa"), "--ref", path("threecolor.hoa"), "--bound", "2", "--inclusion-bound", "4"}).code,
              0);
    // Overapproximation against the same source.
    ASSERT_EQ(run({"approximate", "--in", path("threecolor.hoa"), "--bound", "2", "--target", "parity:2", "--direction",
                   "over", "--out", path("o.hoa")})
                  .code,
              0);
    expect_round_trip(load("o.hoa"));
}

TEST_F(CliTest, ApproximateErrors) {
    write("omega.hoa", hoa::write(families::omega_k(2)));
    // Nondeterministic input to color reduction: contract violation, no output file.
    auto r = run({"approximate", "--in", path("omega.hoa"), "--bound", "2", "--target", "parity:1", "--out", path("x.hoa")});
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(fs::exists(path("x.hoa")));
    EXPECT_EQ(run({"approximate", "--ltl", "G p", "--bound", "2", "--target", "rainbow"}).code, 2);
    EXPECT_EQ(run({"approximate", "--ltl", "G (p", "--bound", "2"}).code, 2);
    EXPECT_EQ(run({"approximate", "--in", write("bad.hoa", "HOA: v1\nStates: x\n"), "--bound", "2"}).code, 2);
    EXPECT_EQ(run({"approximate", "--in", path("missing.hoa"), "--bound", "2"}).code, 2);
    EXPECT_EQ(run({"approximate", "--bound", "2"}).code, 2);
    EXPECT_EQ(run({"approximate", "--ltl", "G p", "--bound", "0"}).code, 2);
}

TEST_F(CliTest, CheckDetectsCorruption) {
    write("gf1.hoa", hoa::write(families::gf_one()));
    ASSERT_EQ(run({"approximate", "--in", path("gf1.hoa"), "--bound", "3", "--out", path("s.hoa")}).code, 0);
    // Remove one transition from the approximation.
    const auto s = load("s.hoa");
    AutomatonBuilder c(s.alphabet());
    for (StateId q = 0; q < s.size(); ++q) c.add_state(s.name(q), s.color(q));
    for (StateId q : s.initial()) c.add_initial(q);
    bool dropped = false;
    for (StateId q = 0; q < s.size(); ++q)
        for (LetterId l = 0; l < s.alphabet().size(); ++l)
            for (StateId t : s.successors(q, l)) {
                if (!dropped && q == s.initial().front() && l == 1) {
                    dropped = true;
                    continue;
                }
                c.add_transition(q, l, t);
            }
    ASSERT_TRUE(dropped);
    write("corrupt.hoa", hoa::write(c.build()));
    const auto r = run({"check", "--in", path("corrupt.hoa"), "--ref", path("gf1.hoa"), "--bound", "3", "--report",
                        path("report.json")});
    EXPECT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(read(path("report.json")));
    EXPECT_GE(j["mismatches"].size(), 1u);
    EXPECT_EQ(j["passed"], false);
    EXPECT_EQ(run({"check", "--in", path("corrupt.hoa"), "--ref", path("gf1.hoa"), "--bound", "0"}).code, 2);
}

TEST_F(CliTest, SynthesizeExamples) {
    auto r = run({"synthesize", "--ltl", "G p", "--bound", "1", "--states", "1", "--colors", "1", "--out", path("w.hoa"),
                  "--result", path("res.json"), "--emit-qbf", path("q.qdimacs")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("SAT k=1"), std::string::npos);
    EXPECT_EQ(load("w.hoa").size(), 1u);
    const auto j = nlohmann::json::parse(read(path("res.json")));
    EXPECT_EQ(j["verdict"], "SAT");
    EXPECT_EQ(j["states"], 1);
    EXPECT_EQ(j["automaton"], path("w.hoa"));
    const auto q = synth::parse_qdimacs(read(path("q.qdimacs")));
    EXPECT_GT(q.num_vars, 0);
    expect_round_trip(load("w.hoa"));

    r = run({"synthesize", "--ltl", "F G p", "--bound", "2", "--states", "1", "--colors", "2", "--out", path("none.hoa"),
             "--result", path("unsat.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("UNSAT"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("none.hoa")));
    EXPECT_EQ(nlohmann::json::parse(read(path("unsat.json")))["verdict"], "UNSAT");
}

TEST_F(CliTest, SynthesizeMinimal) {
    const auto r = run({"synthesize", "--ltl", "G F p", "--bound", "2", "--colors", "1", "--minimal", "--max-states", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("SAT k=2"), std::string::npos);
}

TEST_F(CliTest, SynthesizeErrors) {
    EXPECT_EQ(run({"synthesize", "--ltl", "G F p", "--bound", "3", "--states", "3", "--colors", "2", "--expansion-limit", "5"})
                  .code,
              4);
    EXPECT_EQ(run({"synthesize", "--ltl", "G p", "--bound", "1", "--solver", "/nonexistent/qbf"}).code, 5);
    EXPECT_EQ(run({"synthesize", "--ltl", "G p", "--bound", "1", "--solver", std::string(LASSOTOOL_PATH) + " qbf-solve"}).code,
              0);
    EXPECT_EQ(run({"synthesize", "--ltl", "G p", "--bound", "0"}).code, 2);
    EXPECT_EQ(run({"synthesize", "--bound", "1"}).code, 2);
}

TEST_F(CliTest, Families) {
    auto r = run({"family", "omega", "--k", "3", "--out", path("o.hoa")});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(load("o.hoa").size(), 7u);
    EXPECT_NE(read(path("o.hoa")).find("States: 7"), std::string::npos);
    r = run({"family", "gf1"});
    EXPECT_EQ(hoa::parse(r.out).size(), 2u);
    r = run({"family", "phi-n", "--n", "2", "--sigma", "01"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["family"], "phi-n");
    EXPECT_EQ(j["n"], 2);
    r = run({"family", "phi-n", "--n", "2", "--construct"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(hoa::parse(r.out).is_safety());
    r = run({"family", "fg-gf"});
    EXPECT_EQ(hoa::parse(r.out).num_colors(), 3u);
    r = run({"family", "intro"});
    EXPECT_NE(r.out.find("G F p"), std::string::npos);
    EXPECT_EQ(run({"family", "nope"}).code, 2);
    for (const char* f : {"gf1", "fg-gf"}) expect_round_trip(hoa::parse(run({"family", f}).out));
}

TEST_F(CliTest, InfoComplementAndQbf) {
    write("gf1.hoa", hoa::write(families::gf_one()));
    auto r = run({"info", "--in", path("gf1.hoa")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("type: DBA"), std::string::npos);
    EXPECT_NE(r.out.find("empty: no"), std::string::npos);
    r = run({"complement", "--in", path("gf1.hoa"), "--out", path("c.hoa")});
    ASSERT_EQ(r.code, 0);
    const auto c = load("c.hoa");
    const auto gf = families::gf_one();
    enumerate_bases(gf.alphabet(), 3).for_each([&](const Lasso& w) { EXPECT_NE(accepts_lasso(gf, w), accepts_lasso(c, w)); });
    write("omega.hoa", hoa::write(families::omega_k(2)));
    EXPECT_EQ(run({"complement", "--in", path("omega.hoa")}).code, 3);

    write("sat.qdimacs", "p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n");
    r = run({"qbf-solve", path("sat.qdimacs")});
    EXPECT_EQ(r.code, 10);
    EXPECT_NE(r.out.find("s cnf 1"), std::string::npos);
    EXPECT_NE(r.out.find("V 1 0"), std::string::npos);
    write("unsat.qdimacs", "p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 -2 0\n");
    EXPECT_EQ(run({"qbf-solve", path("unsat.qdimacs")}).code, 20);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"check", "--in", "x.hoa"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
