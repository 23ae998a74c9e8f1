#pragma once

#include "flowgnn/dataset.hpp"
#include "flowgnn/training.hpp"

#include <cstdint>
#include <string>

namespace flowgnn {

/// Standard reflected CRC-32 (polynomial 0xEDB88320).
std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t crc = 0);

/// Binary little-endian records behind a text header; every record carries
/// its own checksum. Writes go to a temp file renamed into place, so a
/// failure never leaves a partial file at the target path.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

struct Checkpoint {
    ModelParams params;
    TrainConfig config;
};

/// All parameter tensors plus the training config and seed that produced
/// them; loading rebuilds the exact model.
void save_checkpoint(ModelParams& params, const TrainConfig& config, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Two-column epoch series (train/validation NMSE), plain text.
void save_history(const TrainHistory& history, const TrainConfig& config, const std::string& path);

/// Key=value lines rendered with lossless double formatting.
std::string format_train_config(const TrainConfig& config);

/// Atomic small-file write helper shared by the command layer.
void write_text_atomic(const std::string& path, const std::string& text);

} // namespace flowgnn
