// SPDX-License-Identifier: Apache-2.0
//
// irsnav - radio-map based robot path planning with intelligent reflecting surfaces
// Copyright (C) 2026 The irsnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Outcome {
    int code = -1;
    std::string out; // stdout and stderr
};

Outcome run(const std::string &args) {
    const std::string cmd = std::string(IRSNAV_CLI) + " " + args + " 2>&1";
    Outcome r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string factory = std::string(IRSNAV_CONFIG_DIR) + "/factory.cfg";
const std::string fixtures = IRSNAV_FIXTURE_DIR;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() / ("irsnav_cli_" + std::to_string(::getpid()));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::filesystem::path dir_;
};

} // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("map").code, 1);
    EXPECT_EQ(run("map " + factory + " --mode sideways").code, 1);
    EXPECT_EQ(run("map " + factory + " --mode discrete --levels 3").code, 1);
    EXPECT_EQ(run("validate " + factory + " --samples 10").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ConfigAndInputErrors) {
    const Outcome missing_height = run("map " + fixtures + "/config_missing_height.cfg");
    EXPECT_EQ(missing_height.code, 2);
    EXPECT_NE(missing_height.out.find("'obstacle'"), std::string::npos) << missing_height.out;
    EXPECT_EQ(run("map /nonexistent/x.cfg").code, 3);
    const Outcome bad_map = run("plan " + factory + " --map " + fixtures + "/map_bad_token.csv");
    EXPECT_EQ(bad_map.code, 3);
    EXPECT_NE(bad_map.out.find("line "), std::string::npos) << bad_map.out;
}

TEST_F(Cli, MapOutputIsReproducible) {
    ASSERT_EQ(run("map " + factory + " --mode 2bit -o " + path("a.csv")).code, 0);
    ASSERT_EQ(run("map " + factory + " --mode discrete --levels 4 --threads 1 -o " + path("b.csv")).code, 0);
    const std::string a = slurp(path("a.csv"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("b.csv")));
    const Outcome r = run("map " + factory + " --out-dir " + path("out"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(std::filesystem::exists(path("out/map.csv")));
    EXPECT_TRUE(std::filesystem::exists(path("out/map.pgm")));
    EXPECT_NE(r.out.find("fingerprint "), std::string::npos);
}

TEST_F(Cli, PlanFeasibleAndInfeasible) {
    const Outcome ok = run("plan " + factory + " -o " + path("p.csv"));
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("distance 21.98"), std::string::npos) << ok.out;
    EXPECT_NE(slurp(path("p.csv")).find("index,x,y,value_db,cumulative_distance"), std::string::npos);

    const Outcome bad = run("plan " + factory + " --gamma -50");
    EXPECT_EQ(bad.code, 4);
    EXPECT_NE(bad.out.find("infeasible_start"), std::string::npos) << bad.out;
    EXPECT_NE(bad.out.find("nearest feasible gamma_bar: -62.32"), std::string::npos) << bad.out;
}

TEST_F(Cli, PlanOnExportedMapMatchesDirectPlan) {
    ASSERT_EQ(run("map " + factory + " -o " + path("m.csv")).code, 0);
    ASSERT_EQ(run("plan " + factory + " --gamma -63.5 -o " + path("direct.csv")).code, 0);
    const Outcome r = run("plan " + factory + " --gamma -63.5 --map " + path("m.csv") + " -o " + path("via_map.csv"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("warning"), std::string::npos) << r.out;
    EXPECT_EQ(slurp(path("direct.csv")), slurp(path("via_map.csv")));
}

TEST_F(Cli, SweepWritesCsv) {
    const Outcome r = run("sweep " + factory + " --values=-64:0.5:-62 --modes no_irs,continuous -o " + path("s.csv"));
    EXPECT_EQ(r.code, 0) << r.out;
    const std::string text = slurp(path("s.csv"));
    EXPECT_EQ(text.rfind("variable,value,mode,distance\n", 0), 0u);
    EXPECT_NE(text.find("gamma_bar_db,-62,no_irs,infeasible"), std::string::npos) << text;
    EXPECT_EQ(run("sweep " + factory + " --variable num_elements --values 200,300").code, 1);
}

TEST_F(Cli, CacheDirectoryGivesIdenticalOutput) {
    const std::string env = "IRSNAV_CACHE_DIR=" + path("cache") + " ";
    const std::string args = " sweep " + factory + " --values=-63.5:0.5:-62.5 --modes 1bit";
    const std::string cold = "env " + env + std::string(IRSNAV_CLI) + args + " 2>&1";
    auto capture = [](const std::string &cmd) {
        std::string out;
        FILE *pipe = popen(cmd.c_str(), "r");
        char buf[4096];
        while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
        pclose(pipe);
        return out;
    };
    const std::string first = capture(cold);
    EXPECT_FALSE(std::filesystem::is_empty(path("cache")));
    EXPECT_EQ(capture(cold), first);
    EXPECT_EQ(run(args).out, first);
}

TEST_F(Cli, ValidatePasses) {
    const Outcome r = run("validate " + factory + " --samples 10000 --seed 3");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("probe,i,j,x,y,closed_form_db"), std::string::npos);
}
