#ifndef CO2OCC_MODEL_IO_HPP
#define CO2OCC_MODEL_IO_HPP

#include <string>
#include <vector>

#include "co2occ/fselm.hpp"

namespace co2occ {

/// Versioned JSON model document. Matrix payloads (r, bias, beta) are
/// base64-encoded little-endian float64, row-major.
inline constexpr int kModelSchemaVersion = 1;

std::string model_to_json(const FsElmModel& model);
FsElmModel model_from_json(const std::string& text);

void save_model(const std::string& path, const FsElmModel& model);
FsElmModel load_model(const std::string& path);

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

} // namespace co2occ

#endif
