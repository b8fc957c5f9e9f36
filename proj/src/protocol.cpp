#include "xdc/protocol.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "xdc/error.hpp"

namespace xdc::wire {

static_assert(std::numeric_limits<float>::is_iec559, "wire format needs IEEE-754 floats");

bool is_known_type(std::uint8_t code) {
    return (code >= 0x01 && code <= 0x08) || code == 0x7F;
}

const char* type_name(MessageType type) {
    switch (type) {
        case MessageType::hello: return "hello";
        case MessageType::denoise_request: return "denoise-request";
        case MessageType::denoise_response: return "denoise-response";
        case MessageType::encode_request: return "encode-request";
        case MessageType::encode_response: return "encode-response";
        case MessageType::decode_request: return "decode-request";
        case MessageType::decode_response: return "decode-response";
        case MessageType::echo: return "echo";
        case MessageType::error: return "error";
    }
    return "unknown";
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    if (frame.payload.size() + 1 > kMaxFrameLength) throw ProtocolError("frame payload too large");
    const auto length = static_cast<std::uint32_t>(frame.payload.size() + 1);
    std::vector<std::uint8_t> out;
    out.reserve(frame.payload.size() + 5);
    out.push_back(static_cast<std::uint8_t>(length >> 24));
    out.push_back(static_cast<std::uint8_t>(length >> 16));
    out.push_back(static_cast<std::uint8_t>(length >> 8));
    out.push_back(static_cast<std::uint8_t>(length));
    out.push_back(static_cast<std::uint8_t>(frame.type));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

void FrameReader::feed(std::span<const std::uint8_t> bytes) {
    if (offset_ > 0 && offset_ == buffer_.size()) {
        buffer_.clear();
        offset_ = 0;
    }
    buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameReader::next() {
    const std::size_t available = buffer_.size() - offset_;
    if (available < 4) return std::nullopt;
    const std::uint8_t* p = buffer_.data() + offset_;
    const std::uint32_t length = (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
                                 (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
    if (length == 0) throw ProtocolError("frame length must include the type byte");
    if (length > kMaxFrameLength) throw ProtocolError("frame length " + std::to_string(length) + " too large");
    if (available >= 5 && !is_known_type(p[4])) {
        throw ProtocolError("unknown message type " + std::to_string(static_cast<int>(p[4])));
    }
    if (available < 4 + static_cast<std::size_t>(length)) return std::nullopt;
    Frame frame{static_cast<MessageType>(p[4]), std::vector<std::uint8_t>(p + 5, p + 4 + length)};
    offset_ += 4 + static_cast<std::size_t>(length);
    if (offset_ == buffer_.size()) {
        buffer_.clear();
        offset_ = 0;
    }
    return frame;
}

std::span<const std::uint8_t> PayloadReader::take(std::size_t n) {
    if (n > bytes_.size() - pos_) throw ProtocolError("payload truncated");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t PayloadReader::u8() { return take(1)[0]; }

std::uint16_t PayloadReader::u16() {
    const auto b = take(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t PayloadReader::u32() {
    const auto b = take(4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

float PayloadReader::f32() {
    const auto b = take(4);
    const std::uint32_t bits =
        std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
    return std::bit_cast<float>(bits);
}

std::string PayloadReader::string(std::size_t length) {
    const auto b = take(length);
    return {b.begin(), b.end()};
}

ImageGrid PayloadReader::grid() {
    const int h = u16();
    const int w = u16();
    const int c = u16();
    if (h == 0 || w == 0 || c == 0) throw ProtocolError("grid dimensions must be positive");
    const std::size_t count = static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c);
    if (count > (bytes_.size() - pos_) / 4) throw ProtocolError("grid payload truncated");
    std::vector<double> data(count);
    for (double& v : data) v = f32();
    return ImageGrid({h, w, c}, std::move(data));
}

void PayloadReader::expect_end() const {
    if (pos_ != bytes_.size()) throw ProtocolError("trailing bytes in payload");
}

void PayloadWriter::u16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
    bytes_.push_back(static_cast<std::uint8_t>(v));
}

void PayloadWriter::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) bytes_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void PayloadWriter::f32(float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int shift = 0; shift < 32; shift += 8) bytes_.push_back(static_cast<std::uint8_t>(bits >> shift));
}

void PayloadWriter::string(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
}

void PayloadWriter::grid(const ImageGrid& grid) {
    const auto& s = grid.shape();
    constexpr int kMaxDim = std::numeric_limits<std::uint16_t>::max();
    if (s.height > kMaxDim || s.width > kMaxDim || s.channels > kMaxDim) {
        throw ProtocolError("grid " + s.to_string() + " exceeds wire dimension limits");
    }
    u16(static_cast<std::uint16_t>(s.height));
    u16(static_cast<std::uint16_t>(s.width));
    u16(static_cast<std::uint16_t>(s.channels));
    bytes_.reserve(bytes_.size() + 4 * grid.size());
    for (double v : grid.values()) f32(static_cast<float>(v));
}

namespace {

void expect_type(const Frame& frame, MessageType expected) {
    if (frame.type == MessageType::error && expected != MessageType::error) {
        throw RemoteError(parse_error(frame));
    }
    if (frame.type != expected) {
        throw ProtocolError(std::string("expected ") + type_name(expected) + " frame, got " + type_name(frame.type));
    }
}

}  // namespace

Frame make_hello(const BridgeHello& hello) {
    PayloadWriter w;
    w.u16(hello.version);
    w.u16(static_cast<std::uint16_t>(hello.shape.height));
    w.u16(static_cast<std::uint16_t>(hello.shape.width));
    w.u16(static_cast<std::uint16_t>(hello.shape.channels));
    w.u32(hello.steps);
    w.u8(static_cast<std::uint8_t>((hello.supports_condition ? 1 : 0) | (hello.supports_encode_decode ? 2 : 0) |
                                   (hello.supports_inpaint_variant ? 4 : 0)));
    return {MessageType::hello, w.take()};
}

BridgeHello parse_hello(const Frame& frame) {
    expect_type(frame, MessageType::hello);
    PayloadReader r(frame.payload);
    BridgeHello hello;
    hello.version = r.u16();
    hello.shape.height = r.u16();
    hello.shape.width = r.u16();
    hello.shape.channels = r.u16();
    hello.steps = r.u32();
    const std::uint8_t flags = r.u8();
    r.expect_end();
    hello.supports_condition = (flags & 1) != 0;
    hello.supports_encode_decode = (flags & 2) != 0;
    hello.supports_inpaint_variant = (flags & 4) != 0;
    if (hello.shape.height == 0 || hello.shape.width == 0 || hello.shape.channels == 0 || hello.steps == 0) {
        throw ProtocolError("hello declares an empty grid or zero steps");
    }
    return hello;
}

Frame make_denoise_request(const DenoisePayload& payload) {
    PayloadWriter w;
    w.u32(payload.step);
    w.f32(payload.guidance_scale);
    w.string(payload.condition);
    w.grid(payload.x_t);
    return {MessageType::denoise_request, w.take()};
}

DenoisePayload parse_denoise_request(const Frame& frame) {
    expect_type(frame, MessageType::denoise_request);
    PayloadReader r(frame.payload);
    const std::uint32_t step = r.u32();
    const float scale = r.f32();
    const std::uint32_t length = r.u32();
    std::string condition = r.string(length);
    ImageGrid x_t = r.grid();
    r.expect_end();
    return {step, scale, std::move(condition), std::move(x_t)};
}

Frame make_denoise_response(const DenoiseResult& result) {
    PayloadWriter w;
    w.u8(result.conditional ? 2 : 1);
    w.grid(result.unconditional);
    if (result.conditional) w.grid(*result.conditional);
    return {MessageType::denoise_response, w.take()};
}

DenoiseResult parse_denoise_response(const Frame& frame) {
    expect_type(frame, MessageType::denoise_response);
    PayloadReader r(frame.payload);
    const std::uint8_t count = r.u8();
    if (count != 1 && count != 2) throw ProtocolError("denoise response must carry one or two grids");
    DenoiseResult result{r.grid(), std::nullopt};
    if (count == 2) {
        result.conditional = r.grid();
        if (!(result.conditional->shape() == result.unconditional.shape())) {
            throw ProtocolError("denoise response grids differ in shape");
        }
    }
    r.expect_end();
    return result;
}

Frame make_grid_frame(MessageType type, const ImageGrid& grid) {
    PayloadWriter w;
    w.grid(grid);
    return {type, w.take()};
}

ImageGrid parse_grid_frame(const Frame& frame, MessageType expected) {
    expect_type(frame, expected);
    PayloadReader r(frame.payload);
    ImageGrid grid = r.grid();
    r.expect_end();
    return grid;
}

Frame make_error(const std::string& message) {
    return {MessageType::error, std::vector<std::uint8_t>(message.begin(), message.end())};
}

std::string parse_error(const Frame& frame) {
    if (frame.type != MessageType::error) throw ProtocolError("not an error frame");
    return {frame.payload.begin(), frame.payload.end()};
}

}  // namespace xdc::wire
