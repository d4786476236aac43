#pragma once

#include <string>

#include "corex/model.hpp"

namespace corex {

inline constexpr int kModelFormatVersion = 1;

// Canonical JSON text of a model; equal models give equal bytes.
std::string serialize_model(const FittedModel& model);
// Throws ParseError (byte offset), UnsupportedVersion or CorruptFile.
FittedModel deserialize_model(const std::string& text);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

}  // namespace corex
