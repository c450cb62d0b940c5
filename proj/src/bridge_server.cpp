/*
 * Copyright (C) 2026 The loomcas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "loomcas/bridge.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <deque>
#include <memory>

namespace loomcas {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

class Connection : public std::enable_shared_from_this<Connection>
{
public:
  Connection(tcp::socket socket, const ScenarioConfig& base, const ServerOptions& opts)
    : ws_(std::move(socket)), timer_(ws_.get_executor()), session_(base), opts_(opts),
      period_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / opts.rate)))
  {}

  void start()
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        spdlog::debug("bridge: handshake failed: {}", ec.message());
        return;
      }
      spdlog::info("bridge: session opened");
      self->next_tick_ = std::chrono::steady_clock::now();
      self->read();
      self->schedule();
    });
  }

private:
  void read()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->session_.push(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->read();
    });
  }

  void schedule()
  {
    next_tick_ += period_;
    timer_.expires_at(next_tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_)
        return;
      for (Json& frame : self->session_.tick())
        self->enqueue(frame.dump());
      self->schedule();
    });
  }

  void enqueue(std::string frame)
  {
    // Drop the oldest queued frame; the one being written stays in place.
    if (outbound_.size() >= opts_.max_outbound && outbound_.size() > 1)
      outbound_.erase(outbound_.begin() + 1);
    outbound_.push_back(std::move(frame));
    if (outbound_.size() == 1)
      write();
  }

  void write()
  {
    ws_.text(true);
    ws_.async_write(net::buffer(outbound_.front()),
      [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) {
          self->close();
          return;
        }
        self->outbound_.pop_front();
        if (!self->outbound_.empty())
          self->write();
      });
  }

  void close()
  {
    if (closed_)
      return;
    closed_ = true;
    timer_.cancel();
    spdlog::info("bridge: session closed");
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  beast::flat_buffer buffer_;
  Session session_;
  ServerOptions opts_;
  std::chrono::steady_clock::duration period_;
  std::chrono::steady_clock::time_point next_tick_;
  std::deque<std::string> outbound_;
  bool closed_ = false;
};

} // namespace

struct Server::Impl
{
  Impl(ScenarioConfig b, ServerOptions o)
    : base(std::move(b)), opts(o), acceptor(ioc)
  {
    const tcp::endpoint ep(net::ip::make_address(opts.address), opts.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
  }

  void accept()
  {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec)
        return;
      std::make_shared<Connection>(std::move(socket), base, opts)->start();
      accept();
    });
  }

  ScenarioConfig base;
  ServerOptions opts;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
};

Server::Server(ScenarioConfig base, ServerOptions opts)
{
  // Reject a bad base scenario before binding.
  Session probe(base);
  impl_ = std::make_unique<Impl>(std::move(base), opts);
}

Server::~Server() = default;

std::uint16_t Server::port() const
{
  return impl_->acceptor.local_endpoint().port();
}

void Server::run()
{
  impl_->accept();
  spdlog::info("bridge: listening on {}:{}", impl_->opts.address, port());
  impl_->ioc.run();
}

void Server::stop()
{
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    impl_->ioc.stop();
  });
}

} // namespace loomcas
