#include "xdc/bridge_client.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "xdc/error.hpp"

namespace xdc {

BridgeAddress BridgeAddress::parse(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw ConfigError("bridge address must be HOST:PORT, got '" + text + "'");
    }
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ConfigError("bad bridge port in '" + text + "'");
    }
    if (port < 1 || port > 65535) throw ConfigError("bridge port out of range in '" + text + "'");
    return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::string BridgeAddress::to_string() const { return host + ":" + std::to_string(port); }

BridgeClient BridgeClient::connect(const BridgeAddress& address, std::chrono::milliseconds timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string port = std::to_string(address.port);
    if (const int rc = getaddrinfo(address.host.c_str(), port.c_str(), &hints, &found); rc != 0) {
        throw TransportError("cannot resolve " + address.to_string() + ": " + gai_strerror(rc));
    }
    int fd = -1;
    std::string last_error = "no addresses";
    for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = std::strerror(errno);
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        last_error = std::strerror(errno);
        ::close(fd);
        fd = -1;
    }
    freeaddrinfo(found);
    if (fd < 0) throw TransportError("cannot connect to " + address.to_string() + ": " + last_error);

    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);

    BridgeClient client(fd);
    client.hello_ = wire::parse_hello(client.receive());
    if (client.hello_.version != wire::kProtocolVersion) {
        throw ProtocolError("bridge speaks protocol version " + std::to_string(client.hello_.version));
    }
    return client;
}

BridgeClient::BridgeClient(int fd) : fd_(fd) {}

BridgeClient::BridgeClient(BridgeClient&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), reader_(std::move(other.reader_)), hello_(other.hello_) {}

BridgeClient& BridgeClient::operator=(BridgeClient&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
        reader_ = std::move(other.reader_);
        hello_ = other.hello_;
    }
    return *this;
}

BridgeClient::~BridgeClient() {
    if (fd_ >= 0) ::close(fd_);
}

void BridgeClient::send_all(const std::vector<std::uint8_t>& bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) throw TransportError(std::string("bridge send failed: ") + std::strerror(errno));
        sent += static_cast<std::size_t>(n);
    }
}

wire::Frame BridgeClient::receive() {
    std::uint8_t chunk[65536];
    while (true) {
        if (auto frame = reader_.next()) return std::move(*frame);
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n == 0) throw TransportError("bridge closed the connection");
        if (n < 0) throw TransportError(std::string("bridge receive failed: ") + std::strerror(errno));
        reader_.feed({chunk, static_cast<std::size_t>(n)});
    }
}

wire::Frame BridgeClient::round_trip(const wire::Frame& request) {
    if (fd_ < 0) throw TransportError("bridge connection is closed");
    send_all(wire::encode_frame(request));
    return receive();
}

NoisePrediction BridgeClient::denoise(const DenoiserRequest& request) {
    if (!(request.x_t.shape() == hello_.shape)) {
        throw ProtocolError("request grid " + request.x_t.shape().to_string() + " does not match declared " +
                            hello_.shape.to_string());
    }
    if (request.step < 1 || static_cast<std::uint32_t>(request.step) > hello_.steps) {
        throw ProtocolError("step " + std::to_string(request.step) + " outside the bridge's 1.." +
                            std::to_string(hello_.steps));
    }
    wire::DenoisePayload payload{static_cast<std::uint32_t>(request.step), static_cast<float>(request.guidance_scale),
                                 request.condition.value_or(std::string{}), request.x_t};
    auto result = wire::parse_denoise_response(round_trip(wire::make_denoise_request(payload)));
    if (!(result.unconditional.shape() == hello_.shape)) {
        throw ProtocolError("bridge answered with grid " + result.unconditional.shape().to_string());
    }
    return {std::move(result.unconditional), std::move(result.conditional)};
}

ImageGrid BridgeClient::echo(const ImageGrid& grid) {
    return wire::parse_grid_frame(round_trip(wire::make_grid_frame(wire::MessageType::echo, grid)),
                                  wire::MessageType::echo);
}

ImageGrid BridgeClient::encode(const ImageGrid& pixels) {
    if (!hello_.supports_encode_decode) throw ProtocolError("bridge does not support encode/decode");
    return wire::parse_grid_frame(round_trip(wire::make_grid_frame(wire::MessageType::encode_request, pixels)),
                                  wire::MessageType::encode_response);
}

ImageGrid BridgeClient::decode(const ImageGrid& latent) {
    if (!hello_.supports_encode_decode) throw ProtocolError("bridge does not support encode/decode");
    return wire::parse_grid_frame(round_trip(wire::make_grid_frame(wire::MessageType::decode_request, latent)),
                                  wire::MessageType::decode_response);
}

}  // namespace xdc
