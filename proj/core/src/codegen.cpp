#include "fuzzyc/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fuzzyc/error.hpp"
#include "text.hpp"

namespace fuzzyc {

namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'Z', 'C', '1'};

void write_function(std::vector<std::uint8_t>& out, std::size_t offset,
                    const MembershipFunction& m) {
  const auto packed = pack_function(m);
  std::copy(packed.begin(), packed.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
}

std::size_t bytes_per_code(int bits) { return static_cast<std::size_t>((bits + 7) / 8); }

std::uint32_t max_code(int bits) { return (std::uint32_t{1} << bits) - 1; }

}  // namespace

std::array<std::uint8_t, kPackedFunctionBytes> pack_function(const MembershipFunction& m) {
  std::array<std::uint8_t, kPackedFunctionBytes> out{};
  for (std::size_t j = 0; j < kPackedFunctionBytes; ++j) {
    out[j] = static_cast<std::uint8_t>(m[2 * j] | (m[2 * j + 1] << 4));
  }
  return out;
}

MembershipFunction unpack_function(std::span<const std::uint8_t, kPackedFunctionBytes> packed) {
  MembershipFunction::Levels levels{};
  for (std::size_t j = 0; j < kPackedFunctionBytes; ++j) {
    levels[2 * j] = packed[j] & 0x0F;
    levels[2 * j + 1] = static_cast<TruthLevel>(packed[j] >> 4);
  }
  return MembershipFunction(levels);
}

ChipImage write_rule_image(const ChipObject& chip) {
  if (chip.type() != ChipType::Minmax) {
    throw CapacityError("inference chip target requires a MINMAX chip; " + chip.name() + " is " +
                        std::string(to_string(chip.type())));
  }
  if (chip.input_count() > kImageInputs) {
    throw CapacityError("inference chip supports max 4 inputs; " + chip.name() + " has " +
                        std::to_string(chip.input_count()));
  }
  if (chip.output_count() > kImageOutputs) {
    throw CapacityError("inference chip supports max 2 outputs; " + chip.name() + " has " +
                        std::to_string(chip.output_count()));
  }
  if (chip.rule_count() > kImageRuleSlots) {
    throw CapacityError("inference chip supports max 16 rules; " + chip.name() + " has " +
                        std::to_string(chip.rule_count()));
  }

  ChipImage image{std::vector<std::uint8_t>(kImageBytes, 0)};
  auto& b = image.bytes;
  std::copy(std::begin(kMagic), std::end(kMagic), b.begin());
  b[4] = kImageVersion;
  b[5] = static_cast<std::uint8_t>(chip.rule_count());

  const auto& rules = chip.compiled().rules;
  for (std::size_t slot = 0; slot < kImageRuleSlots; ++slot) {
    std::size_t offset = kImageHeaderBytes + slot * kImageSlotBytes;
    const CompiledRule* rule = slot < rules.size() ? &rules[slot] : nullptr;
    for (std::size_t x = 0; x < kImageInputs; ++x, offset += kPackedFunctionBytes) {
      const bool real = rule && x < rule->antecedent.size();
      write_function(b, offset, real ? rule->antecedent[x] : MembershipFunction::any());
    }
    for (std::size_t y = 0; y < kImageOutputs; ++y, offset += kPackedFunctionBytes) {
      const bool real = rule && y < rule->consequent.size();
      write_function(b, offset, real ? rule->consequent[y] : MembershipFunction::null());
    }
  }
  return image;
}

DecodedImage decode_rule_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kImageBytes) {
    throw Error(ErrorCategory::Data, "rule image must be " + std::to_string(kImageBytes) +
                                         " bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw Error(ErrorCategory::Data, "bad rule image magic");
  }
  if (bytes[4] != kImageVersion) {
    throw Error(ErrorCategory::Data, "unsupported rule image version " + std::to_string(bytes[4]));
  }
  if (bytes[5] > kImageRuleSlots || bytes[6] != 0 || bytes[7] != 0) {
    throw Error(ErrorCategory::Data, "corrupt rule image header");
  }
  DecodedImage out;
  out.rule_count = bytes[5];
  for (std::size_t slot = 0; slot < kImageRuleSlots; ++slot) {
    for (std::size_t f = 0; f < kImageInputs + kImageOutputs; ++f) {
      const std::size_t offset = kImageHeaderBytes + slot * kImageSlotBytes + f * kPackedFunctionBytes;
      out.slots[slot][f] =
          unpack_function(std::span<const std::uint8_t, kPackedFunctionBytes>(
              bytes.subspan(offset, kPackedFunctionBytes)));
    }
  }
  return out;
}

std::vector<int> decode_address(std::uint32_t address, std::size_t inputs) {
  std::vector<int> levels(inputs);
  for (std::size_t k = 0; k < inputs; ++k) {
    levels[k] = static_cast<int>((address >> (4 * k)) & 0xF);
  }
  return levels;
}

std::uint32_t encode_address(std::span<const int> levels) {
  std::uint32_t address = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    address |= static_cast<std::uint32_t>(levels[k] & 0xF) << (4 * k);
  }
  return address;
}

std::uint32_t quantize_output(double y, const Universe& u, int bits) {
  const double scaled = std::round((y - u.lo()) / u.width() * max_code(bits));
  return static_cast<std::uint32_t>(std::clamp(scaled, 0.0, static_cast<double>(max_code(bits))));
}

double dequantize_output(std::uint32_t code, const Universe& u, int bits) {
  return u.lo() + code / static_cast<double>(max_code(bits)) * u.width();
}

AddressTable gen_table(const ChipObject& chip, int bytesize) {
  if (chip.input_count() < 1) throw CapacityError("memory chip needs at least 1 input");
  if (chip.input_count() > kMaxTableInputs) {
    throw CapacityError("memory chip table supports max 6 inputs (2^24 addresses); " +
                        chip.name() + " has " + std::to_string(chip.input_count()));
  }
  if (bytesize < 0 || bytesize > kMaxBytesize) {
    throw Error(ErrorCategory::Data,
                "bytesize must be 0 (reals) or 1..16, got " + std::to_string(bytesize));
  }

  AddressTable t;
  t.input_count = chip.input_count();
  t.output_count = chip.output_count();
  t.bytesize = bytesize;
  t.outputs.resize(t.row_count() * t.output_count);

  const auto& outs = chip.compiled().outputs;
  for (std::uint32_t a = 0; a < t.row_count(); ++a) {
    const auto levels = decode_address(a, t.input_count);
    const auto crisp = infer_levels(chip, levels).outputs;
    bool dead = false;
    for (std::size_t o = 0; o < t.output_count; ++o) {
      const Universe& u = outs[o].universe;
      double y = u.midpoint();
      if (crisp[o]) {
        y = *crisp[o];
      } else {
        dead = true;
      }
      t.outputs[a * t.output_count + o] =
          bytesize == 0 ? y : static_cast<double>(quantize_output(y, u, bytesize));
    }
    if (dead) t.no_activation.push_back(a);
  }
  return t;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

std::string emit_table(const AddressTable& t) {
  std::string out = "INPUT " + std::to_string(t.input_count) + "  OUTPUT " +
                    std::to_string(t.output_count) + "  BYTESIZE " + std::to_string(t.bytesize) +
                    "\n";
  out.reserve(out.size() + t.row_count() * (8 + 3 * t.input_count + 12 * t.output_count));
  for (std::uint32_t a = 0; a < t.row_count(); ++a) {
    out += std::to_string(a);
    for (int level : decode_address(a, t.input_count)) {
      out += '\t';
      out += std::to_string(level);
    }
    for (std::size_t o = 0; o < t.output_count; ++o) {
      out += '\t';
      const double v = t.output(a, o);
      out += t.bytesize == 0 ? format_real(v) : std::to_string(static_cast<std::uint32_t>(v));
    }
    out += '\n';
  }
  return out;
}

AddressTable parse_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto fail = [](const std::string& msg) { return Error(ErrorCategory::Data, "table: " + msg); };

  std::string kw_in, kw_out, kw_bs;
  long long n = 0, m = 0, b = 0;
  if (!(in >> kw_in >> n >> kw_out >> m >> kw_bs >> b) || kw_in != "INPUT" ||
      kw_out != "OUTPUT" || kw_bs != "BYTESIZE") {
    throw fail("expected header 'INPUT <n>  OUTPUT <m>  BYTESIZE <b>'");
  }
  if (n < 1 || n > static_cast<long long>(kMaxTableInputs) || m < 1 || b < 0 ||
      b > kMaxBytesize) {
    throw fail("header values out of range");
  }

  AddressTable t;
  t.input_count = static_cast<std::size_t>(n);
  t.output_count = static_cast<std::size_t>(m);
  t.bytesize = static_cast<int>(b);
  t.outputs.resize(t.row_count() * t.output_count);

  std::string tok;
  for (std::uint32_t a = 0; a < t.row_count(); ++a) {
    long long addr = 0;
    if (!(in >> tok) || !detail::parse_int(tok, addr) || addr != a) {
      throw fail("expected row for address " + std::to_string(a));
    }
    const auto expected = decode_address(a, t.input_count);
    for (std::size_t k = 0; k < t.input_count; ++k) {
      long long level = 0;
      if (!(in >> tok) || !detail::parse_int(tok, level) || level != expected[k]) {
        throw fail("input levels of address " + std::to_string(a) + " do not match the address");
      }
    }
    for (std::size_t o = 0; o < t.output_count; ++o) {
      double v = 0;
      if (!(in >> tok) || !detail::parse_real(tok, v)) {
        throw fail("bad output value at address " + std::to_string(a));
      }
      t.outputs[a * t.output_count + o] = v;
    }
  }
  if (in >> tok) throw fail("unexpected data after the last row");
  return t;
}

std::vector<std::uint8_t> emit_table_binary(const AddressTable& t) {
  if (t.bytesize < 1 || t.bytesize > kMaxBytesize) {
    throw Error(ErrorCategory::Data, "binary table needs bytesize 1..16 (real outputs have no "
                                     "binary layout)");
  }
  const std::size_t width = bytes_per_code(t.bytesize);
  std::vector<std::uint8_t> out;
  out.reserve(t.outputs.size() * width);
  for (double v : t.outputs) {
    const auto code = static_cast<std::uint32_t>(v);
    for (std::size_t i = 0; i < width; ++i) {
      out.push_back(static_cast<std::uint8_t>((code >> (8 * i)) & 0xFF));
    }
  }
  return out;
}

}  // namespace fuzzyc
