#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xdc/image.hpp"

namespace xdc::wire {

// frame    = [u32 BE length of type+payload][u8 type][payload]
// grid     = [u16 BE H][u16 BE W][u16 BE C][H*W*C f32 LE, planar per channel]

enum class MessageType : std::uint8_t {
    hello = 0x01,
    denoise_request = 0x02,
    denoise_response = 0x03,
    encode_request = 0x04,
    encode_response = 0x05,
    decode_request = 0x06,
    decode_response = 0x07,
    echo = 0x08,
    error = 0x7F,
};

inline constexpr std::uint16_t kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxFrameLength = 256U << 20;

[[nodiscard]] bool is_known_type(std::uint8_t code);
[[nodiscard]] const char* type_name(MessageType type);

struct Frame {
    MessageType type;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

[[nodiscard]] std::vector<std::uint8_t> encode_frame(const Frame& frame);

/// Incremental frame parser. Bytes go in with feed(); next() yields a frame
/// only once all of its bytes have arrived. Throws ProtocolError on a zero or
/// oversized length or an unknown type code.
class FrameReader {
public:
    void feed(std::span<const std::uint8_t> bytes);
    [[nodiscard]] std::optional<Frame> next();
    [[nodiscard]] std::size_t buffered() const { return buffer_.size() - offset_; }

private:
    std::vector<std::uint8_t> buffer_;
    std::size_t offset_ = 0;
};

/// Bounds-checked cursor over a payload; every read past the end is a ProtocolError.
class PayloadReader {
public:
    explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    float f32();
    std::string string(std::size_t length);
    ImageGrid grid();
    void expect_end() const;

private:
    std::span<const std::uint8_t> take(std::size_t n);

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

class PayloadWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void f32(float v);
    void string(const std::string& s);
    void grid(const ImageGrid& grid);

    [[nodiscard]] std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

struct BridgeHello {
    std::uint16_t version = kProtocolVersion;
    GridShape shape;
    std::uint32_t steps = 0;
    bool supports_condition = false;
    bool supports_encode_decode = false;
    bool supports_inpaint_variant = false;

    friend bool operator==(const BridgeHello&, const BridgeHello&) = default;
};

struct DenoisePayload {
    std::uint32_t step = 0;
    float guidance_scale = 0.0F;
    std::string condition;
    ImageGrid x_t;
};

struct DenoiseResult {
    ImageGrid unconditional;
    std::optional<ImageGrid> conditional;
};

[[nodiscard]] Frame make_hello(const BridgeHello& hello);
[[nodiscard]] BridgeHello parse_hello(const Frame& frame);

[[nodiscard]] Frame make_denoise_request(const DenoisePayload& payload);
[[nodiscard]] DenoisePayload parse_denoise_request(const Frame& frame);

[[nodiscard]] Frame make_denoise_response(const DenoiseResult& result);
[[nodiscard]] DenoiseResult parse_denoise_response(const Frame& frame);

/// echo, encode/decode request and response frames all carry a single grid.
[[nodiscard]] Frame make_grid_frame(MessageType type, const ImageGrid& grid);
[[nodiscard]] ImageGrid parse_grid_frame(const Frame& frame, MessageType expected);

[[nodiscard]] Frame make_error(const std::string& message);
[[nodiscard]] std::string parse_error(const Frame& frame);

}  // namespace xdc::wire
