#pragma once

#include "flowgnn/runconfig.hpp"

namespace flowgnn {

/// Command bodies shared by the CLI binary and the test suites. Each one
/// validates its config slice up front, runs, and writes its artifacts
/// atomically; failures propagate as exceptions and leave no partial files.
void cmd_generate(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_benchmark(const RunConfig& config);
void cmd_analyze(const RunConfig& config);

void run_command(const RunConfig& config, Command command);

} // namespace flowgnn
