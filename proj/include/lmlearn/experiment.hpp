#pragma once

#include "lmlearn/ground_task.hpp"
#include "lmlearn/io.hpp"
#include "lmlearn/lgg.hpp"
#include "lmlearn/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lmlearn {

struct ExperimentConfig {
    std::filesystem::path domain;
    std::vector<std::filesystem::path> problems;
    std::size_t train_count = 4;
    std::size_t test_count = 10;
    std::size_t repetitions = 5;
    std::uint64_t seed = 0;
    std::size_t top_n = 1;
    double threshold = 0.0;
    // Holds <problem-stem>.lgg.json files used instead of the native extractor.
    std::optional<std::filesystem::path> reference_dir;
};

struct TaskRecord {
    std::string task;
    double instantiate_ms = 0.0;
    MetricReport report;
    std::size_t oracle_landmarks = 0;
    double plgg_oracle_recall = 0.0;
    double reference_oracle_recall = 0.0;
};

struct RepetitionRecord {
    std::uint64_t seed = 0;
    std::vector<std::string> train;
    std::vector<std::string> test;
    double learn_ms = 0.0;
    std::vector<TaskRecord> tasks;
    MetricReport mean;
    double plgg_oracle_recall = 0.0;
    double reference_oracle_recall = 0.0;
};

struct RunRecord {
    std::string domain;
    std::vector<RepetitionRecord> repetitions;
    MetricReport mean;
    double plgg_oracle_recall = 0.0;
    double reference_oracle_recall = 0.0;
    double extract_ms = 0.0; // total over all problems
    double mean_learn_ms = 0.0;
    double mean_instantiate_ms = 0.0;
};

// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// Arithmetic mean of ratios; counts are summed.
MetricReport mean_report(const std::vector<MetricReport> &reports);

// Repetition r uses seed + r. Throws std::invalid_argument when the split does
// not fit the problem list.
RunRecord run_experiment(const ExperimentConfig &config);

std::string format_metric_table(const RunRecord &run);
std::string format_oracle_table(const RunRecord &run);
Json run_to_json(const RunRecord &run);

} // namespace lmlearn
