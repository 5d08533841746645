#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyc/engine.hpp"

namespace fuzzyc {

// Inference-chip rule memory (.fzc):
//   bytes 0-3   magic "FZC1"
//   byte  4     format version (1)
//   byte  5     number of real rules
//   bytes 6-7   reserved, zero
//   then 16 rule slots of 48 bytes: antecedents X1..X4, consequents Y1..Y2,
//   each membership function 8 bytes with column 2j in the low nibble of
//   byte j and column 2j+1 in the high nibble.
inline constexpr std::size_t kImageInputs = 4;
inline constexpr std::size_t kImageOutputs = 2;
inline constexpr std::size_t kImageRuleSlots = 16;
inline constexpr std::size_t kImageHeaderBytes = 8;
inline constexpr std::size_t kPackedFunctionBytes = kResolution / 2;
inline constexpr std::size_t kImageSlotBytes =
    (kImageInputs + kImageOutputs) * kPackedFunctionBytes;
inline constexpr std::size_t kImageBytes = kImageHeaderBytes + kImageRuleSlots * kImageSlotBytes;
inline constexpr std::uint8_t kImageVersion = 1;

struct ChipImage {
  std::vector<std::uint8_t> bytes;

  friend bool operator==(const ChipImage&, const ChipImage&) = default;
};

/// Rule slots read back from an image; padding slots included.
struct DecodedImage {
  std::size_t rule_count = 0;
  std::array<std::array<MembershipFunction, kImageInputs + kImageOutputs>, kImageRuleSlots> slots;
};

/// Packs a Minmax chip (<= 4 inputs, <= 2 outputs, <= 16 rules) into the
/// 776-byte image. Unused antecedents are ANY, unused consequents NULL.
/// Throws CapacityError naming the violated limit.
ChipImage write_rule_image(const ChipObject& chip);
DecodedImage decode_rule_image(std::span<const std::uint8_t> bytes);

std::array<std::uint8_t, kPackedFunctionBytes> pack_function(const MembershipFunction& m);
MembershipFunction unpack_function(std::span<const std::uint8_t, kPackedFunctionBytes> packed);

inline constexpr std::size_t kMaxTableInputs = 6;  // 16^6 = 2^24 addresses
inline constexpr int kMaxBytesize = 16;

/// Memory-chip table: one row per quantized input state. Input 0 is the least
/// significant nibble of the address. With bytesize 0 the outputs are reals;
/// otherwise they are integer codes 0 .. 2^bytesize - 1 stored as doubles.
struct AddressTable {
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  int bytesize = 0;
  std::vector<double> outputs;  // row-major: row * output_count + output
  /// Addresses where no rule fired and the universe midpoint was substituted.
  std::vector<std::uint32_t> no_activation;

  std::size_t row_count() const noexcept { return std::size_t{1} << (4 * input_count); }
  double output(std::uint32_t address, std::size_t o) const {
    return outputs[address * output_count + o];
  }
};

std::vector<int> decode_address(std::uint32_t address, std::size_t inputs);
std::uint32_t encode_address(std::span<const int> levels);

/// Evaluates the chip at every quantized input state.
/// Throws CapacityError above 6 inputs and Error for bytesize outside 0..16.
AddressTable gen_table(const ChipObject& chip, int bytesize);

/// Integer code for y with `bits` bits of resolution over u.
std::uint32_t quantize_output(double y, const Universe& u, int bits);
double dequantize_output(std::uint32_t code, const Universe& u, int bits);

/// Text table: `INPUT n  OUTPUT m  BYTESIZE b` then tab-separated rows
/// `address level... output...`. Reals print with 7 significant digits.
std::string emit_table(const AddressTable& t);
AddressTable parse_table(std::string_view text);
/// Number formatting shared by tables and simulation output.
std::string format_real(double v);

/// Packed little-endian outputs, ceil(bytesize / 8) bytes each, address order.
std::vector<std::uint8_t> emit_table_binary(const AddressTable& t);

}  // namespace fuzzyc
