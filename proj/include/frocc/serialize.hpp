#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "frocc/model.hpp"

namespace frocc {

// Versioned JSON model document:
//   {format_version, m, epsilon, kernel:{variant, params}, mode, seed, d,
//    n_train, directions: m x d, per_direction: [...], standardizer, checksum}
// Doubles are written in shortest round-trip form, so load(save(m)) == m
// bit for bit. The checksum is FNV-1a 64 over the document without it.
std::string to_json_string(const FroccModel& model);
FroccModel from_json_string(std::string_view text);

void save(const FroccModel& model, const std::filesystem::path& path);
FroccModel load(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

// Hash of the serialized model; equal models hash equal.
std::string model_hash(const FroccModel& model);

}  // namespace frocc
