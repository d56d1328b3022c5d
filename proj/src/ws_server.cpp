#include "gaze/ws_server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "gaze/session.hpp"

namespace gaze {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

// Runs on its own thread with its own io_context; owns everything it touches.
void serve_connection(std::shared_ptr<net::io_context> ctx, tcp::socket socket, EngineConfig config) {
    try {
        websocket::stream<tcp::socket> ws(std::move(socket));
        ws.accept();
        LiveSession session(config);
        for (;;) {
            beast::flat_buffer buffer;
            ws.read(buffer);
            const auto text = beast::buffers_to_string(buffer.data());
            for (const auto& m : session.handle(text)) {
                ws.text(true);
                ws.write(net::buffer(m.dump()));
            }
        }
    } catch (const std::exception&) {
        // closed by peer or network error: the session is discarded
    }
    (void)ctx;
}

}  // namespace

struct WsServer::Impl {
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    EngineConfig config;

    void accept_next() {
        auto ctx = std::make_shared<net::io_context>();
        acceptor.async_accept(*ctx, [this, ctx](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            std::thread(serve_connection, ctx, std::move(socket), config).detach();
            accept_next();
        });
    }
};

WsServer::WsServer(const std::string& address, std::uint16_t port, const EngineConfig& config)
    : impl_(std::make_unique<Impl>()) {
    require_valid(config);
    impl_->config = config;
    try {
        const tcp::endpoint ep{net::ip::make_address(address), port};
        impl_->acceptor.open(ep.protocol());
        impl_->acceptor.set_option(net::socket_base::reuse_address(true));
        impl_->acceptor.bind(ep);
        impl_->acceptor.listen();
    } catch (const boost::system::system_error& e) {
        throw std::runtime_error("cannot listen on " + address + ":" + std::to_string(port) + ": " + e.what());
    }
    impl_->accept_next();
}

WsServer::~WsServer() { stop(); }

std::uint16_t WsServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WsServer::run() { impl_->ioc.run(); }

void WsServer::start() {
    runner_ = std::thread([this] { run(); });
}

void WsServer::stop() {
    net::post(impl_->ioc, [impl = impl_.get()] {
        beast::error_code ec;
        impl->acceptor.close(ec);
    });
    impl_->ioc.stop();
    if (runner_.joinable()) runner_.join();
}

}  // namespace gaze
