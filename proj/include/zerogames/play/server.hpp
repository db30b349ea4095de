// Copyright 2026 The Zerogames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "httplib.h"
#include "json.hpp"
#include "zerogames/play/match.hpp"

namespace zg::play {

using json = nlohmann::json;

inline json action_json(const Action& a) { return {{"channel", a.channel}, {"r", a.row}, {"c", a.col}}; }

inline json to_json(const MatchView& v) {
  json j;
  j["id"] = v.id;
  j["game"] = v.game_id;
  j["human"] = to_string(v.human);
  j["status"] = v.status.kind == GameStatus::Kind::Ongoing ? "ongoing"
                : v.status.kind == GameStatus::Kind::Draw  ? "draw"
                                                           : "win";
  j["winner"] = v.status.is_win() ? json(to_string(v.status.winner)) : json(nullptr);
  j["ply"] = v.ply;
  j["to_move"] = to_string(v.to_move);
  j["engine_thinking"] = v.engine_thinking;
  j["action_space"] = {{"channels", v.space.channels}, {"height", v.space.height}, {"width", v.space.width}};
  j["cells"] = json::array();
  for (const auto& c : v.cells) {
    j["cells"].push_back({{"r", c.row},
                          {"c", c.col},
                          {"owner", c.owner ? json(to_string(*c.owner)) : json(nullptr)},
                          {"label", c.label}});
  }
  j["history"] = json::array();
  for (const auto& h : v.history) j["history"].push_back(h.chance ? json{{"roll", h.roll}} : action_json(h.action));
  j["legal"] = json::array();
  for (int a : v.legal) j["legal"].push_back(action_json(v.space.triple(a)));
  j["engine_visits"] = json::array();
  for (std::size_t a = 0; a < v.engine_visits.size(); ++a) {
    if (v.engine_visits[a] == 0) continue;
    auto e = action_json(v.space.triple(int(a)));
    e["visits"] = v.engine_visits[a];
    j["engine_visits"].push_back(e);
  }
  j["engine_simulations"] = v.engine_simulations;
  j["board"] = v.board;
  return j;
}

inline json games_json() {
  json out = json::array();
  for (const auto& g : games::list_games()) {
    out.push_back({{"family", g.family}, {"pattern", g.pattern}, {"description", g.description}, {"pie_rule", g.pie_rule}});
  }
  return out;
}

inline Player parse_player(const std::string& s) {
  if (s == "first") return Player::First;
  if (s == "second") return Player::Second;
  throw std::invalid_argument("player must be \"first\" or \"second\"");
}

// JSON front end of a MatchService:
//   POST /matches             {game, size?, checkpoint?, simulations?, human?, seed?}
//   GET  /matches/{id}
//   POST /matches/{id}/moves  {channel, r, c, ply?}
//   GET  /games
// Errors come back as {"error": kind, "message": text}.
class HttpServer {
 public:
  explicit HttpServer(MatchService& service) : service_(service) {
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server_.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server_.Get("/games", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, games_json()); });
    server_.Post("/matches", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto body = json::parse(req.body.empty() ? "{}" : req.body);
        MatchRequest m;
        m.game = body.at("game").get<std::string>();
        m.size = body.value("size", 0);
        m.checkpoint = body.value("checkpoint", std::string());
        m.simulations = body.value("simulations", 64);
        m.human = parse_player(body.value("human", std::string("first")));
        if (body.contains("seed")) m.seed = body["seed"].get<std::uint64_t>();
        reply(res, 201, to_json(service_.create(m)));
      });
    });
    server_.Get(R"(/matches/([A-Za-z0-9]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 200, to_json(service_.get(req.matches[1]))); });
    });
    server_.Post(R"(/matches/([A-Za-z0-9]+)/moves)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const auto body = json::parse(req.body);
        Action a{body.value("channel", 0), body.at("r").get<int>(), body.at("c").get<int>()};
        std::optional<int> ply;
        if (body.contains("ply")) ply = body["ply"].get<int>();
        reply(res, 200, to_json(service_.submit(req.matches[1], a, ply)));
      });
    });
  }

  bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
  int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen() { return server_.listen_after_bind(); }
  void wait_until_ready() { server_.wait_until_ready(); }
  void stop() { server_.stop(); }

 private:
  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void fail(httplib::Response& res, int status, const char* kind, const std::string& message) {
    reply(res, status, {{"error", kind}, {"message", message}});
  }

  template <typename F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const UnknownMatchError& e) {
      fail(res, 404, "unknown_match", e.what());
    } catch (const NotYourTurnError& e) {
      fail(res, 409, "not_your_turn", e.what());
    } catch (const MatchFinishedError& e) {
      fail(res, 409, "match_finished", e.what());
    } catch (const StaleMoveError& e) {
      fail(res, 409, "stale_move", e.what());
    } catch (const IllegalMoveError& e) {
      fail(res, 422, "illegal_move", e.what());
    } catch (const IncompatibleCheckpointError& e) {
      fail(res, 400, "incompatible_checkpoint", e.what());
    } catch (const games::UnknownGameError& e) {
      fail(res, 400, "unknown_game", e.what());
    } catch (const games::InvalidBoardSizeError& e) {
      fail(res, 400, "invalid_size", e.what());
    } catch (const nn::CheckpointError& e) {
      fail(res, 400, "bad_checkpoint", e.what());
    } catch (const json::exception& e) {
      fail(res, 400, "bad_request", e.what());
    } catch (const std::invalid_argument& e) {
      fail(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      fail(res, 500, "internal", e.what());
    }
  }

  MatchService& service_;
  httplib::Server server_;
};

}  // namespace zg::play
