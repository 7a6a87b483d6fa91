#include "ehnet/config.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ehnet/errors.hpp"

namespace ehnet {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (at.IsDefined() && at.Mark().line >= 0) {
      os << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
    }
    os << ": " << field << ": " << what;
    throw ValidationError(os.str());
  }

  YAML::Node need(const YAML::Node& parent, const std::string& key, const std::string& path) const {
    if (!parent.IsMap()) fail(parent, path, "expected a mapping");
    YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) fail(parent, path + "." + key, "missing field");
    return n;
  }

  template <class T>
  T as(const YAML::Node& n, const std::string& field) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, field, "cannot read '" + scalar_text(n) + "' as " + type_name<T>());
    }
  }

  template <class T>
  T get(const YAML::Node& parent, const std::string& key, const std::string& path) const {
    return as<T>(need(parent, key, path), path + "." + key);
  }

  template <class T>
  std::optional<T> maybe(const YAML::Node& parent, const std::string& key,
                         const std::string& path) const {
    if (!parent.IsDefined() || !parent.IsMap()) return std::nullopt;
    YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return as<T>(n, path + "." + key);
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(n, field, "expected a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      out.push_back(as<double>(n[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::pair<int, int> pair(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, field, "expected [a, b]");
    return {as<int>(n[0], field + "[0]"), as<int>(n[1], field + "[1]")};
  }

 private:
  static std::string scalar_text(const YAML::Node& n) {
    return n.IsScalar() ? n.Scalar() : std::string("<non-scalar>");
  }
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else return "a string";
  }

  std::string source_;
};

}  // namespace

Config parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ValidationError(os.str());
  }
  const Reader rd(source);
  if (!root.IsMap()) rd.fail(root, "<root>", "expected a mapping at top level");

  Config cfg;
  Scenario& sc = cfg.scenario;
  sc.name = rd.maybe<std::string>(root, "name", "").value_or("unnamed");

  const YAML::Node net = rd.need(root, "network", "");
  const int nodes = rd.get<int>(net, "nodes", "network");
  std::vector<Link> links;
  const YAML::Node ln = rd.need(net, "links", "network");
  if (!ln.IsSequence()) rd.fail(ln, "network.links", "expected a list of [from, to]");
  for (std::size_t i = 0; i < ln.size(); ++i) {
    auto [a, b] = rd.pair(ln[i], "network.links[" + std::to_string(i) + "]");
    links.push_back({a, b});
  }
  std::vector<NodeId> flows;
  for (double f : rd.numbers(rd.need(net, "flows", "network"), "network.flows")) {
    flows.push_back(static_cast<NodeId>(f));
  }
  try {
    sc.network = NetworkSpec(nodes, links, flows);
  } catch (const ValidationError& e) {
    rd.fail(net, "network", e.what());
  }

  const YAML::Node sys = rd.need(root, "system", "");
  SystemParams& s = sc.system;
  s.R_max = rd.get<double>(sys, "R_max", "system");
  s.P_max = rd.get<double>(sys, "P_max", "system");
  s.mu_max = rd.get<double>(sys, "mu_max", "system");
  s.E_max = rd.get<double>(sys, "E_max", "system");
  s.xi = rd.get<double>(sys, "xi", "system");
  s.eta = rd.get<double>(sys, "eta", "system");
  s.e_max = rd.get<double>(sys, "e_max", "system");

  const YAML::Node rp = rd.need(root, "rate_power", "");
  try {
    sc.rate_model.kind = parse_rate_kind(rd.get<std::string>(rp, "kind", "rate_power"));
  } catch (const ValidationError& e) {
    rd.fail(rp["kind"], "rate_power.kind", e.what());
  }
  sc.rate_model.channel_domain =
      rd.numbers(rd.need(rp, "channel_states", "rate_power"), "rate_power.channel_states");
  sc.rate_model.noise_variance =
      rd.maybe<double>(rp, "noise_variance", "rate_power").value_or(1.0);

  const YAML::Node ut = rd.need(root, "utility", "");
  const std::string form = rd.get<std::string>(ut, "form", "utility");
  const double weight = rd.maybe<double>(ut, "weight", "utility").value_or(1.0);
  const double exponent = rd.maybe<double>(ut, "exponent", "utility").value_or(0.5);
  const YAML::Node terms = rd.need(ut, "terms", "utility");
  if (!terms.IsSequence()) rd.fail(terms, "utility.terms", "expected a list of [node, destination]");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string field = "utility.terms[" + std::to_string(i) + "]";
    auto [node, dest] = rd.pair(terms[i], field);
    try {
      if (node < 1 || node > nodes) throw ValidationError("node " + std::to_string(node) + " out of range");
      if (!sc.network.reaches(node, dest)) {
        throw ValidationError("node " + std::to_string(node) + " has no path to " + std::to_string(dest));
      }
      UtilityTerm t{node, sc.network.flow_index(dest), UtilityFunction::parse(form, weight, exponent)};
      sc.utility.terms.push_back(t);
    } catch (const ValidationError& e) {
      rd.fail(terms[i], field, e.what());
    }
  }

  try {
    derive_constants(sc);
  } catch (const ValidationError& e) {
    rd.fail(rp, "rate_power", e.what());
  }

  const YAML::Node env = root["environment"];
  if (env.IsDefined() && !env.IsNull()) {
    if (auto kind = rd.maybe<std::string>(env, "energy", "environment")) {
      try {
        cfg.environment.harvest = parse_harvest_kind(*kind);
      } catch (const ValidationError& e) {
        rd.fail(env["energy"], "environment.energy", e.what());
      }
    }
    if (auto seed = rd.maybe<std::uint64_t>(env, "seed", "environment")) cfg.environment.seed = *seed;
  }

  const YAML::Node alg = root["algorithm"];
  if (alg.IsDefined() && !alg.IsNull()) {
    if (auto name = rd.maybe<std::string>(alg, "name", "algorithm")) {
      try {
        cfg.defaults.algorithm = parse_algorithm(*name);
      } catch (const ValidationError& e) {
        rd.fail(alg["name"], "algorithm.name", e.what());
      }
    }
    if (auto V = rd.maybe<double>(alg, "V", "algorithm")) cfg.defaults.V = *V;
    cfg.defaults.gamma = rd.maybe<double>(alg, "Gamma", "algorithm");
    if (auto h = rd.maybe<std::int64_t>(alg, "horizon", "algorithm")) cfg.defaults.horizon = *h;
    if (auto r = rd.maybe<int>(alg, "runs", "algorithm")) cfg.defaults.runs = *r;
  }

  const double peak = sc.rate_model.peak_rate(s.P_max);
  if (peak > s.mu_max) {
    std::ostringstream os;
    os << "rate model can reach " << peak << " packets/slot on one link, above mu_max = " << s.mu_max
       << "; Theta still uses mu_max";
    cfg.warnings.push_back(os.str());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace ehnet
