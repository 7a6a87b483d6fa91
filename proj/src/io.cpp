#include "ehnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace ehnet::io {

using nlohmann::json;

std::string number(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_trace_csv(std::ostream& out, const Scenario& sc, const RunTrace& trace) {
  const NetworkSpec& net = sc.network;
  const std::size_t F = net.flow_count();
  out << kTraceHeader << '\n';
  for (const SlotRecord& r : trace.slots) {
    const auto t = r.state.slot;
    for (NodeId n = 1; n <= net.node_count(); ++n) {
      for (std::size_t f = 0; f < F; ++f) {
        out << t << ',' << n << ',' << net.flows()[f] << ',' << number(r.state.q(n, f)) << ",,"
            << number(r.decision.R[(n - 1) * F + f]) << ",,,,\n";
      }
    }
    for (NodeId n = 1; n <= net.node_count(); ++n) {
      double mu = 0;
      std::string S;
      for (std::size_t l : net.out_links(n)) {
        mu += r.decision.mu_link[l];
        if (!S.empty()) S += '|';
        S += number(r.env.channel.gain(n, net.links()[l].to));
      }
      out << t << ',' << n << ",,," << number(r.state.e(n)) << ",,"
          << number(r.decision.node_power(net, n)) << ',' << number(mu) << ','
          << number(r.harvested[n - 1]) << ',' << S << '\n';
    }
  }
}

json to_json(const RunMetrics& m) {
  return {{"horizon", m.horizon},
          {"mean_rate", m.mean_rate},
          {"utility", m.utility},
          {"mean_slot_utility", m.mean_slot_utility},
          {"admitted", m.admitted},
          {"delivered", m.delivered},
          {"harvest_available", m.harvest_available},
          {"harvest_stored", m.harvest_stored},
          {"energy_utilization", m.energy_utilization},
          {"max_backlog", m.max_backlog},
          {"min_energy", m.min_energy},
          {"max_energy", m.max_energy},
          {"invariant_checks", m.invariant_checks}};
}

RunMetrics metrics_from_json(const json& j) {
  RunMetrics m;
  j.at("horizon").get_to(m.horizon);
  j.at("mean_rate").get_to(m.mean_rate);
  j.at("utility").get_to(m.utility);
  j.at("mean_slot_utility").get_to(m.mean_slot_utility);
  j.at("admitted").get_to(m.admitted);
  j.at("delivered").get_to(m.delivered);
  j.at("harvest_available").get_to(m.harvest_available);
  j.at("harvest_stored").get_to(m.harvest_stored);
  j.at("energy_utilization").get_to(m.energy_utilization);
  j.at("max_backlog").get_to(m.max_backlog);
  j.at("min_energy").get_to(m.min_energy);
  j.at("max_energy").get_to(m.max_energy);
  j.at("invariant_checks").get_to(m.invariant_checks);
  return m;
}

namespace {

json stat(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}}; }
Stat stat(const json& j) { return {j.at("mean").get<double>(), j.at("std").get<double>()}; }

}  // namespace

json to_json(const EnsembleSummary& s) {
  json per_run = json::array();
  for (const auto& m : s.per_run) per_run.push_back(to_json(m));
  return {{"scenario", s.scenario},
          {"algorithm", s.algorithm},
          {"V", s.V},
          {"Gamma", s.gamma ? json(*s.gamma) : json(nullptr)},
          {"horizon", s.horizon},
          {"runs", s.runs},
          {"base_seed", s.base_seed},
          {"rng", {{"algorithm", s.rng}, {"version", s.rng_version}}},
          {"utility", stat(s.utility)},
          {"mean_slot_utility", stat(s.mean_slot_utility)},
          {"energy_utilization", stat(s.energy_utilization)},
          {"max_backlog", stat(s.max_backlog)},
          {"per_run", per_run}};
}

EnsembleSummary summary_from_json(const json& j) {
  EnsembleSummary s;
  j.at("scenario").get_to(s.scenario);
  j.at("algorithm").get_to(s.algorithm);
  j.at("V").get_to(s.V);
  if (!j.at("Gamma").is_null()) s.gamma = j.at("Gamma").get<double>();
  j.at("horizon").get_to(s.horizon);
  j.at("runs").get_to(s.runs);
  j.at("base_seed").get_to(s.base_seed);
  j.at("rng").at("algorithm").get_to(s.rng);
  j.at("rng").at("version").get_to(s.rng_version);
  s.utility = stat(j.at("utility"));
  s.mean_slot_utility = stat(j.at("mean_slot_utility"));
  s.energy_utilization = stat(j.at("energy_utilization"));
  s.max_backlog = stat(j.at("max_backlog"));
  for (const auto& m : j.at("per_run")) s.per_run.push_back(metrics_from_json(m));
  return s;
}

// ------------------------------------------------------------------- charts

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  double x0 = kUnlimited, x1 = -kUnlimited, y0 = 0, y1 = -kUnlimited;
  for (const auto& s : series) {
    for (double x : s.x) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.y) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!(x1 > x0)) x0 -= 1, x1 += 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n"
     << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << number(std::round(xv * 100) / 100) << "</text>\n"
       << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << number(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n"
     << "<text transform=\"translate(16," << (T + H - B) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << c
         << "\"/>\n";
    }
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (k + 1) << "\" fill=\"" << c << "\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<Series> utility_series(const std::vector<SweepPoint>& points) {
  std::map<std::string, Series> by;
  std::vector<std::string> order;
  for (const auto& p : points) {
    if (!p.ok) continue;
    if (!by.count(p.algorithm)) {
      order.push_back(p.algorithm);
      by[p.algorithm].label = p.algorithm;
    }
    by[p.algorithm].x.push_back(p.value);
    by[p.algorithm].y.push_back(p.summary.utility.mean);
  }
  std::vector<Series> out;
  for (const auto& name : order) out.push_back(by[name]);
  return out;
}

}  // namespace ehnet::io
