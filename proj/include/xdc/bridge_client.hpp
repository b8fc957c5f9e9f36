#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "xdc/denoiser.hpp"
#include "xdc/protocol.hpp"

namespace xdc {

struct BridgeAddress {
    std::string host;
    std::uint16_t port = 0;

    /// Parses HOST:PORT; throws ConfigError on malformed input.
    [[nodiscard]] static BridgeAddress parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

/// Blocking client for one bridge connection: reads the hello on connect,
/// then serves one request at a time.
///
/// Socket failures raise TransportError, framing or declared-contract
/// violations ProtocolError, and error frames from the bridge RemoteError.
class BridgeClient {
public:
    [[nodiscard]] static BridgeClient connect(const BridgeAddress& address,
                                              std::chrono::milliseconds timeout = std::chrono::seconds(30));

    BridgeClient(BridgeClient&& other) noexcept;
    BridgeClient& operator=(BridgeClient&& other) noexcept;
    BridgeClient(const BridgeClient&) = delete;
    BridgeClient& operator=(const BridgeClient&) = delete;
    ~BridgeClient();

    [[nodiscard]] const wire::BridgeHello& hello() const { return hello_; }

    [[nodiscard]] NoisePrediction denoise(const DenoiserRequest& request);
    [[nodiscard]] ImageGrid echo(const ImageGrid& grid);
    [[nodiscard]] ImageGrid encode(const ImageGrid& pixels);
    [[nodiscard]] ImageGrid decode(const ImageGrid& latent);

private:
    explicit BridgeClient(int fd);

    wire::Frame round_trip(const wire::Frame& request);
    void send_all(const std::vector<std::uint8_t>& bytes);
    wire::Frame receive();

    int fd_ = -1;
    wire::FrameReader reader_;
    wire::BridgeHello hello_;
};

/// Denoiser backed by a bridge connection.
class BridgeDenoiser final : public Denoiser {
public:
    explicit BridgeDenoiser(BridgeClient client) : client_(std::move(client)) {}

    [[nodiscard]] GridShape grid_shape() const override { return client_.hello().shape; }
    [[nodiscard]] int step_count() const override { return static_cast<int>(client_.hello().steps); }
    [[nodiscard]] NoisePrediction predict(const DenoiserRequest& request) override { return client_.denoise(request); }

    [[nodiscard]] BridgeClient& client() { return client_; }

private:
    BridgeClient client_;
};

}  // namespace xdc
