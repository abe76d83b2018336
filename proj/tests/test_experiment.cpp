#include "cornergas/errors.hpp"
#include "cornergas/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace cornergas;
namespace fs = std::filesystem;

TEST(Experiment, VerdictChecks)
{
    EXPECT_TRUE(make_verdict("p", "x", 1.05, 1.0, 0.1, Check::Relative).pass);
    EXPECT_FALSE(make_verdict("p", "x", 1.2, 1.0, 0.1, Check::Relative).pass);
    EXPECT_TRUE(make_verdict("p", "x", 1e-9, 0.0, 1e-8, Check::Absolute).pass);
    EXPECT_FALSE(make_verdict("p", "x", 2.0, 1.0, 0.0, Check::UpperBound).pass);
    EXPECT_TRUE(make_verdict("p", "x", 1.0, 0.0, 0.0, Check::Flag).pass);
    EXPECT_FALSE(make_verdict("p", "x", 0.0, 0.0, 0.0, Check::Flag).pass);
    EXPECT_FALSE(make_verdict("p", "x", std::nan(""), 0.0, 1.0, Check::Absolute).pass);
    const auto v = make_verdict("p", "slope", 1.0, 1.0, 0.15, Check::Relative);
    EXPECT_EQ(v.line().rfind("PASS p slope: measured=1 target=1 tol=15% (rel)", 0), 0u);
}

TEST(Experiment, PresetRegistry)
{
    const auto& ids = preset_ids();
    EXPECT_EQ(ids.size(), 11u);
    for (const auto& id : ids) {
        EXPECT_FALSE(preset_statement(id).empty());
        const auto cfg = default_config(id);
        EXPECT_EQ(cfg.id, id);
        EXPECT_NO_THROW(cfg.validate()) << id;
        EXPECT_GT(estimated_minutes(cfg), 0.0);
    }
    EXPECT_THROW(default_config("nope"), InvalidArgument);
}

TEST(Experiment, ConfigParsingAndValidation)
{
    const auto cfg = parse_experiment_config(R"({"id": "thm13-corner-slope", "rows": 256, "cols": 1024,
        "n_schedule": [32, 64, 128], "tolerances": {"slope": 0.2}, "precision": "double"})");
    EXPECT_EQ(cfg.rows, 256);
    EXPECT_EQ(cfg.n_schedule.back(), 128);
    EXPECT_EQ(cfg.tolerance("slope", 0.15), 0.2);
    EXPECT_EQ(cfg.tolerance("other", 0.15), 0.15);

    EXPECT_THROW(parse_experiment_config(R"({"id": "thm13-corner-slope", "n_schedule": [64, 32]})"),
                 InvalidArgument);
    EXPECT_THROW(parse_experiment_config(R"({"id": "thm14-equipotential-loewner", "r_schedule": [-0.1, 0.2]})"),
                 InvalidArgument);
    EXPECT_THROW(parse_experiment_config(R"({"id": "thm13-corner-slope", "memory_budget_mib": 16})"),
                 InvalidArgument);
    EXPECT_THROW(parse_experiment_config(R"({"id": "thm13-corner-slope", "rows": 64, "n_schedule": [128]})"),
                 InvalidArgument);
    EXPECT_THROW(parse_experiment_config(R"({"id": "thm12-wp-limit", "precision": "quad"})"), InvalidArgument);
    EXPECT_THROW(parse_experiment_config("[]"), InvalidArgument);
}

TEST(Experiment, CheapPresetsPassAndWriteFiles)
{
    const fs::path out = fs::temp_directory_path() / "cornergas_test_experiment";
    fs::remove_all(out);
    for (const std::string id : {"lemma44-integral", "thm12-wp-limit", "prop31-exterior-identity"}) {
        auto cfg = default_config(id);
        cfg.out_dir = out;
        const auto rep = run_experiment(cfg);
        EXPECT_TRUE(rep.passed()) << id;
        EXPECT_FALSE(rep.files.empty()) << id;
        for (const auto& f : rep.files) EXPECT_TRUE(fs::exists(f)) << f;
        EXPECT_TRUE(fs::exists(out / id / "verdicts.txt")) << id;
    }
}

TEST(Experiment, SmallCornerRunProducesVerdicts)
{
    auto cfg = default_config("thm17-grunsky-asymptotics");
    cfg.rows = 128;
    cfg.cols = 512;
    cfg.n_schedule = {8, 16, 32, 64};
    const auto rep = run_experiment(cfg);
    EXPECT_FALSE(rep.verdicts.empty());
    for (const auto& v : rep.verdicts) EXPECT_TRUE(std::isfinite(v.measured)) << v.line();
    clear_matrix_cache();
}
