#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qlab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "qlab");
    std::vector<const char*> argv;
    for (auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("qlab-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                           "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    fs::path dir;
};

} // namespace

TEST_F(Cli, QCharCounts)
{
    auto r = run({"qchar", "--type", "A1", "--node", "1", "--out", path("a1.json")});
    EXPECT_EQ(r.code, 0);
    auto j = read_json_file(path("a1.json"));
    EXPECT_EQ(j["entries"].size(), 2u);
    EXPECT_EQ(j["conventions"], kConventions);
    r = run({"qchar", "--type", "A2", "--node", "1", "--out", path("a2.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(read_json_file(path("a2.json"))["entries"].size(), 3u);
    EXPECT_NE(r.out.find("A2"), std::string::npos);
}

TEST_F(Cli, UsageErrors)
{
    auto r = run({"qchar", "--type", "X9"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("UnsupportedType"), std::string::npos);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"qchar", "--node", "x"}).code, 1);
    EXPECT_EQ(run({"qchar", "--type", "A2", "--node", "3"}).code, 1);
    EXPECT_EQ(run({"quiver-search", "--type", "A1", "--v", "1@(1,1)", "--w", "1@(1,0)", "--theta", "0"}).code, 1);
}

TEST_F(Cli, ResourceErrors)
{
    EXPECT_EQ(run({"qchar", "--type", "A3", "--cap-monomials", "3"}).code, 2);
    EXPECT_EQ(run({"extremal-check", "--type", "E6", "--node", "1"}).code, 2);
    EXPECT_EQ(run({"quiver-search", "--type", "A1", "--v", "3@(1,1)", "--w", "3@(1,0)", "--cap-entries", "4"}).code, 2);
    EXPECT_EQ(run({"quiver-search", "--type", "A1", "--v", "1@(1,1)", "--w", "1@(1,0)", "--field", "Q"}).code, 2);
}

TEST_F(Cli, Extremal)
{
    EXPECT_EQ(run({"extremal-check", "--type", "G2", "--node", "1"}).code, 0);
    auto r = run({"extremal-check", "--type", "A2", "--node", "2", "--report", path("rep.json")});
    EXPECT_EQ(r.code, 0);
    auto j = read_json_file(path("rep.json"));
    EXPECT_EQ(j["reports"][0]["group_order"], 6);
    EXPECT_TRUE(j["reports"][0]["violations"].empty());
    EXPECT_EQ(run({"extremal-check", "--type", "B2", "--word", "1,2,1"}).code, 0);
}

TEST_F(Cli, CorruptedCache)
{
    const std::string cache = path("cache");
    EXPECT_EQ(run({"extremal-check", "--type", "A2", "--node", "1", "--cache-dir", cache}).code, 0);
    std::vector<fs::path> files(fs::directory_iterator(cache), fs::directory_iterator{});
    ASSERT_EQ(files.size(), 1u);
    // cache hit gives the same output
    EXPECT_EQ(run({"qchar", "--type", "A2", "--node", "1", "--cache-dir", cache}).out,
              run({"qchar", "--type", "A2", "--node", "1"}).out);
    std::string text = slurp(files[0]);
    auto pos = text.find("\"mu\": 1");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 7, "\"mu\": 5");
    std::ofstream(files[0], std::ios::binary) << text;
    auto r = run({"extremal-check", "--type", "A2", "--node", "1", "--cache-dir", cache});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("CacheIntegrity"), std::string::npos);
    std::ofstream(files[0], std::ios::binary) << "{not json";
    EXPECT_EQ(run({"qchar", "--type", "A2", "--node", "1", "--cache-dir", cache}).code, 2);
}

TEST_F(Cli, CacheDirFromEnvironment)
{
    const std::string cache = path("env-cache");
    ::setenv("QLAB_CACHE_DIR", cache.c_str(), 1);
    auto r = run({"qchar", "--type", "B2", "--node", "2"});
    ::unsetenv("QLAB_CACHE_DIR");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(cache));
    EXPECT_FALSE(fs::is_empty(cache));
}

TEST_F(Cli, QuiverReflectA1)
{
    GradedQuiverRep<F2> rep(build_cartan("A1"), LatticeVector::unit({1, 1}), LatticeVector::unit({1, 0}));
    rep.set_A(1, 0, Matrix<F2>::identity(1));
    write_file(path("point-a1.json"), dump(to_json(rep)));
    auto r = run({"quiver-reflect", "--node", "1", "--theta", "-1", path("point-a1.json"), "--out", path("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = read_json_file(path("r.json"));
    EXPECT_TRUE(j["v"].empty());
    EXPECT_TRUE(j["maps"].empty());
    EXPECT_EQ(j["theta"].dump(), "[1]");
    // reflecting again needs theta_1 < 0
    EXPECT_EQ(run({"quiver-reflect", "--node", "1", path("r.json")}).code, 1);
}

TEST_F(Cli, QuiverCheck)
{
    GradedQuiverRep<F2> zero(build_cartan("A2"), LatticeVector::unit({1, 1}), LatticeVector::unit({1, 0}));
    write_file(path("zero.json"), dump(to_json(zero)));
    auto r = run({"quiver-check", path("zero.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("theta-stable: no"), std::string::npos);

    GradedQuiverRep<F2> looped(build_cartan("A1"), LatticeVector{{{1, 1}, 1}, {{1, -1}, 1}},
                               LatticeVector::unit({1, 0}));
    looped.set_A(1, 0, Matrix<F2>::identity(1));
    looped.set_arrow(1, 1, 1, Matrix<F2>::identity(1));
    write_file(path("bad.json"), dump(to_json(looped)));
    EXPECT_EQ(run({"quiver-check", path("bad.json")}).code, 3);
    EXPECT_EQ(run({"quiver-check", path("missing.json")}).code, 1);
}

TEST_F(Cli, QuiverSearchA2)
{
    auto r = run({"quiver-search", "--type", "A2", "--v", "1@(1,1),1@(2,2)", "--w", "1@(1,0)", "--out",
                  path("s.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = read_json_file(path("s.json"));
    ASSERT_FALSE(j["stable"].empty());
    // a stable point found by the search reflects cleanly through w0
    write_file(path("p.json"), dump(j["stable"][0]));
    EXPECT_EQ(run({"quiver-reflect", "--word", "1,2,1", path("p.json")}).code, 0);
    EXPECT_EQ(run({"quiver-check", path("p.json")}).out.find("theta-stable: yes") != std::string::npos, true);
}

TEST_F(Cli, ConfigFile)
{
    std::ofstream(path("run.ini")) << "type = A2\nnode = 1\nout = " << path("cfg.json") << "\n";
    auto r = run({"qchar", "--config", path("run.ini")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_json_file(path("cfg.json"))["entries"].size(), 3u);
}

TEST_F(Cli, Deterministic)
{
    for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(run({"extremal-check", "--type", "B3", "--report", path("r" + std::to_string(k))}).code, 0);
        EXPECT_EQ(run({"qchar", "--type", "G2", "--out", path("q" + std::to_string(k))}).code, 0);
    }
    EXPECT_EQ(slurp(path("r0")), slurp(path("r1")));
    EXPECT_EQ(slurp(path("q0")), slurp(path("q1")));
    EXPECT_EQ(run({"qchar", "--type", "G2", "--shuffle-seed", "7", "--out", path("q2")}).code, 0);
    EXPECT_EQ(slurp(path("q0")), slurp(path("q2")));
}
