#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace svar {

using StageParams = std::map<std::string, std::string>;

// Declarative pipeline: stages run in file order, all randomness derived
// from the single master seed, every output hashed into the manifest.
struct PipelineConfig {
    std::uint64_t master_seed = 0;
    std::string out_dir = ".";
    std::vector<std::pair<std::string, StageParams>> stages;
};

PipelineConfig load_pipeline_config(const std::string& path);

// Executes one stage; returns the paths of the files it wrote.
// Relative paths resolve against out_dir.
std::vector<std::string> run_stage(const std::string& kind, const StageParams& params,
                                   const std::string& out_dir, std::uint64_t master_seed);

// Runs all stages and writes <out_dir>/manifest.txt. A stage failure leaves
// <out_dir>/FAILED.txt naming the stage and rethrows.
void run_pipeline(const PipelineConfig& config);

std::string sha256_file(const std::string& path);

}  // namespace svar
