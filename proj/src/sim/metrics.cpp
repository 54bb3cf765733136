// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/metrics.hpp"

#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dagfl {

namespace {

constexpr std::string_view kMagic = "# dagfl-metrics v1";
constexpr std::string_view kColumns = "time,iterations,tips,accuracy,loss";

template <class T>
T parse_number(std::string_view text) {
  T v{};
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw std::runtime_error("metrics csv: bad number '" + std::string(text) + "'");
  }
  return v;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& out, const MetricsLog& log) {
  out << kMagic << " system=" << log.system << " seed=" << log.seed << '\n' << kColumns << '\n';
  for (const auto& r : log.rows) {
    out << format_double(r.time) << ',' << r.iterations << ',' << r.tips << ','
        << format_double(r.accuracy) << ',' << format_double(r.loss) << '\n';
  }
}

MetricsLog read_csv(std::istream& in) {
  MetricsLog log;
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0) {
    throw std::runtime_error("metrics csv: missing '# dagfl-metrics v1' header");
  }
  std::istringstream header(line.substr(kMagic.size()));
  for (std::string token; header >> token;) {
    if (token.rfind("system=", 0) == 0) log.system = token.substr(7);
    if (token.rfind("seed=", 0) == 0) log.seed = parse_number<std::uint64_t>(token.substr(5));
  }
  if (!std::getline(in, line) || line != kColumns) {
    throw std::runtime_error("metrics csv: unexpected column header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cells.push_back(rest);
    if (cells.size() != 5) throw std::runtime_error("metrics csv: expected 5 columns");
    log.rows.push_back({parse_number<double>(cells[0]), parse_number<std::uint64_t>(cells[1]),
                        parse_number<std::size_t>(cells[2]), parse_number<double>(cells[3]),
                        parse_number<double>(cells[4])});
  }
  return log;
}

nlohmann::json summary_json(const MetricsLog& log) {
  const RunSummary& s = log.summary;
  nlohmann::json contribution = nlohmann::json::array();
  for (const auto& c : s.contribution) contribution.push_back(optional_json(c));
  return {
      {"system", log.system},
      {"seed", log.seed},
      {"end_reason", s.end_reason},
      {"diagnostic", s.diagnostic},
      {"end_time", s.end_time},
      {"final_accuracy", s.final_accuracy},
      {"final_loss", s.final_loss},
      {"tail_accuracy", s.tail_accuracy},
      {"global_objective", optional_json(s.global_objective)},
      {"attack_success_rate", s.attack_success_rate},
      {"counters",
       {{"arrivals", s.arrivals},
        {"lost_arrivals", s.lost_arrivals},
        {"iterations", s.iterations},
        {"failed_iterations", s.failed_iterations},
        {"aborted_iterations", s.aborted_iterations},
        {"dropped_uploads", s.dropped_uploads},
        {"transactions", s.transactions},
        {"rounds", s.rounds},
        {"blocks", s.blocks}}},
      {"delays",
       {{"mean_delay", s.mean_delay},
        {"expected_delay", s.expected_delay},
        {"mean_interarrival", s.mean_interarrival}}},
      {"contribution",
       {{"m", s.m_threshold},
        {"per_node", contribution},
        {"r", optional_json(s.r)},
        {"r0", optional_json(s.r0)},
        {"r0_over_r", optional_json(s.r0_over_r)},
        {"undefined", s.undefined_rates}}},
      {"tips", {{"mean", s.mean_tips}, {"predicted", optional_json(s.predicted_tips)}}},
  };
}

RunSummary summary_from_json(const nlohmann::json& j) {
  RunSummary s;
  s.end_reason = j.at("end_reason").get<std::string>();
  s.diagnostic = j.value("diagnostic", "");
  s.end_time = j.at("end_time").get<double>();
  s.final_accuracy = j.at("final_accuracy").get<double>();
  s.final_loss = j.at("final_loss").get<double>();
  s.tail_accuracy = j.at("tail_accuracy").get<double>();
  s.global_objective = optional_from(j, "global_objective");
  s.attack_success_rate = j.at("attack_success_rate").get<double>();
  const auto& c = j.at("counters");
  s.arrivals = c.at("arrivals").get<std::uint64_t>();
  s.lost_arrivals = c.at("lost_arrivals").get<std::uint64_t>();
  s.iterations = c.at("iterations").get<std::uint64_t>();
  s.failed_iterations = c.at("failed_iterations").get<std::uint64_t>();
  s.aborted_iterations = c.at("aborted_iterations").get<std::uint64_t>();
  s.dropped_uploads = c.at("dropped_uploads").get<std::uint64_t>();
  s.transactions = c.at("transactions").get<std::uint64_t>();
  s.rounds = c.at("rounds").get<std::uint64_t>();
  s.blocks = c.at("blocks").get<std::uint64_t>();
  const auto& d = j.at("delays");
  s.mean_delay = d.at("mean_delay").get<double>();
  s.expected_delay = d.at("expected_delay").get<double>();
  s.mean_interarrival = d.at("mean_interarrival").get<double>();
  const auto& a = j.at("contribution");
  s.m_threshold = a.at("m").get<std::size_t>();
  for (const auto& v : a.at("per_node")) {
    s.contribution.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  }
  s.r = optional_from(a, "r");
  s.r0 = optional_from(a, "r0");
  s.r0_over_r = optional_from(a, "r0_over_r");
  s.undefined_rates = a.at("undefined").get<std::size_t>();
  const auto& t = j.at("tips");
  s.mean_tips = t.at("mean").get<double>();
  s.predicted_tips = optional_from(t, "predicted");
  return s;
}

double global_objective(std::span<const double> per_node_loss) {
  if (per_node_loss.empty()) throw std::invalid_argument("global objective of zero nodes");
  return std::accumulate(per_node_loss.begin(), per_node_loss.end(), 0.0) /
         static_cast<double>(per_node_loss.size());
}

}  // namespace dagfl
