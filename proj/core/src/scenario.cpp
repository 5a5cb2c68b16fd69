#include "possib/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include "possib/error.hpp"

namespace possib {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ParseError(path, "expected a mapping");
}

void require_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(join(path, key), "unknown field");
  }
}

YAML::Node required(const YAML::Node& parent, const std::string& path, const char* key) {
  const YAML::Node node = parent[key];
  if (!node) throw ParseError(join(path, key), "missing required field");
  return node;
}

double to_number(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ParseError(path, "expected a number");
  const std::string text = node.Scalar();
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) throw ParseError(path, "expected a finite decimal number");
  return v;
}

std::string to_text(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ParseError(path, "expected a string");
  return node.Scalar();
}

bool to_bool(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ParseError(path, "expected true or false");
  }
}

std::uint64_t to_u64(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ParseError(path, "expected an unsigned integer");
  const std::string& text = node.Scalar();
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError(path, "expected an unsigned integer");
  return v;
}

std::vector<double> to_numbers(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ParseError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(to_number(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Mapping label -> T covering exactly the outcomes of the space.
template <typename T, typename F>
std::vector<T> per_outcome(const YAML::Node& node, const std::string& path, const SampleSpace& space, F&& read) {
  require_map(node, path);
  std::vector<T> out(space.size());
  std::vector<bool> seen(space.size(), false);
  for (const auto& kv : node) {
    const auto label = kv.first.as<std::string>();
    const auto idx = space.index_of(label);
    if (!idx) throw ParseError(join(path, label), "not an outcome of space.outcomes");
    out[*idx] = read(kv.second, join(path, label));
    seen[*idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError(join(path, space.label(i)), "missing entry for outcome");
  return out;
}

SpaceRef parse_space(const YAML::Node& root) {
  const auto node = required(root, "", "space");
  require_keys(node, "space", {"outcomes"});
  const auto outcomes = required(node, "space", "outcomes");
  if (!outcomes.IsSequence() || outcomes.size() == 0) throw ParseError("space.outcomes", "expected a non-empty list");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    labels.push_back(to_text(outcomes[i], "space.outcomes[" + std::to_string(i) + "]"));
  try {
    return make_space(std::move(labels));
  } catch (const ValidationError& e) {
    throw ParseError("space.outcomes", e.what());
  }
}

GeneratorSpec parse_generator(const YAML::Node& root, const SampleSpace& space) {
  const std::string path = "generator";
  const auto node = required(root, "", "generator");
  require_map(node, path);
  const std::string family = to_text(required(node, path, "family"), join(path, "family"));
  GeneratorSpec gen;
  if (family == "explicit") {
    require_keys(node, path, {"family", "table"});
    const auto table = required(node, path, "table");
    if (!table.IsSequence() || table.size() == 0) throw ParseError(join(path, "table"), "expected a non-empty list of rows");
    ExplicitTable t;
    for (std::size_t k = 0; k < table.size(); ++k) {
      const std::string row_path = path + ".table[" + std::to_string(k) + "]";
      auto row = to_numbers(table[k], row_path);
      if (row.size() != space.size()) {
        throw ParseError(row_path, "row has " + std::to_string(row.size()) + " values for " +
                                       std::to_string(space.size()) + " outcomes");
      }
      t.rows.push_back(std::move(row));
    }
    gen = std::move(t);
  } else if (family == "affine-basis") {
    require_keys(node, path, {"family", "coefficients"});
    AffineBasis a;
    a.coefficients = per_outcome<AffineCoefficients>(
        required(node, path, "coefficients"), join(path, "coefficients"), space,
        [](const YAML::Node& c, const std::string& p) {
          require_keys(c, p, {"alpha", "beta", "gamma", "eta"});
          AffineCoefficients out;
          if (c["alpha"]) out.alpha = to_number(c["alpha"], join(p, "alpha"));
          if (c["beta"]) out.beta = to_number(c["beta"], join(p, "beta"));
          if (c["gamma"]) out.gamma = to_number(c["gamma"], join(p, "gamma"));
          if (c["eta"]) out.eta = to_number(c["eta"], join(p, "eta"));
          return out;
        });
    gen = std::move(a);
  } else if (family == "seeded-uniform") {
    require_keys(node, path, {"family", "seed", "base", "amp"});
    SeededUniform s;
    s.seed = to_u64(required(node, path, "seed"), join(path, "seed"));
    s.base = per_outcome<double>(required(node, path, "base"), join(path, "base"), space, to_number);
    s.amp = per_outcome<double>(required(node, path, "amp"), join(path, "amp"), space,
                                [](const YAML::Node& v, const std::string& p) {
                                  const double a = to_number(v, p);
                                  if (a < 0.0) throw ParseError(p, "amplitude must be non-negative");
                                  return a;
                                });
    gen = std::move(s);
  } else {
    throw ParseError(join(path, "family"), "unknown generator family '" + family +
                                               "' (expected explicit, affine-basis or seeded-uniform)");
  }
  return gen;
}

LlnSettings parse_lln(const YAML::Node& root) {
  LlnSettings out;
  const auto node = root["lln"];
  if (!node) return out;
  const std::string path = "lln";
  require_keys(node, path, {"theorem", "psi", "delta", "C"});
  try {
    if (node["theorem"]) out.theorem = parse_theorem(to_text(node["theorem"], "lln.theorem"));
  } catch (const DomainError& e) {
    throw ParseError("lln.theorem", e.what());
  }
  if (const auto psi = node["psi"]) {
    const std::string p = "lln.psi";
    require_keys(psi, p, {"family", "delta", "scale", "values"});
    PsiFunction::Family family;
    try {
      family = parse_psi_family(to_text(required(psi, p, "family"), join(p, "family")));
    } catch (const DomainError& e) {
      throw ParseError(join(p, "family"), e.what());
    }
    try {
      if (family == PsiFunction::Family::kTable) {
        if (psi["delta"] || psi["scale"]) throw ParseError(p, "table psi takes only 'values'");
        out.psi = PsiFunction::table(to_numbers(required(psi, p, "values"), join(p, "values")));
      } else {
        if (psi["values"]) throw ParseError(join(p, "values"), "only valid for the table family");
        const double delta = to_number(required(psi, p, "delta"), join(p, "delta"));
        const double scale = psi["scale"] ? to_number(psi["scale"], join(p, "scale")) : 1.0;
        out.psi = family == PsiFunction::Family::kPower ? PsiFunction::power(delta, scale)
                                                        : PsiFunction::log_power(delta, scale);
      }
    } catch (const ValidationError& e) {
      throw ParseError(p, e.what());
    }
  }
  if (node["delta"]) out.delta = to_number(node["delta"], "lln.delta");
  if (node["C"]) {
    out.constant = to_number(node["C"], "lln.C");
    if (*out.constant < 0.0) throw ParseError("lln.C", "constant must be non-negative");
  }
  return out;
}

void parse_run(const YAML::Node& root, Scenario& s) {
  const auto node = root["run"];
  if (!node) return;
  require_keys(node, "run", {"horizon", "eps_grid"});
  if (node["horizon"]) {
    const auto h = to_u64(node["horizon"], "run.horizon");
    if (h == 0) throw ParseError("run.horizon", "horizon must be at least 1");
    s.horizon = static_cast<std::size_t>(h);
  }
  if (node["eps_grid"]) {
    auto grid = to_numbers(node["eps_grid"], "run.eps_grid");
    if (grid.empty()) throw ParseError("run.eps_grid", "expected at least one epsilon");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (!(grid[i] > 0.0)) throw ParseError("run.eps_grid[" + std::to_string(i) + "]", "epsilon must be positive");
    s.eps_grid = std::move(grid);
  }
}

std::string number_text(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void emit_numbers(YAML::Emitter& out, const std::vector<double>& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << number_text(v);
  out << YAML::EndSeq;
}

}  // namespace

bool Scenario::operator==(const Scenario& other) const {
  return *space == *other.space && distribution == other.distribution && renormalize == other.renormalize &&
         generator == other.generator && lln == other.lln && horizon == other.horizon && eps_grid == other.eps_grid;
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError("", std::string("malformed document: ") + e.what());
  }
  if (!root || !root.IsMap()) throw ParseError("", "scenario document must be a mapping");
  require_keys(root, "", {"space", "distribution", "generator", "lln", "run"});

  SpaceRef space = parse_space(root);

  const auto dnode = required(root, "", "distribution");
  require_keys(dnode, "distribution", {"weights", "renormalize"});
  const bool renormalize = dnode["renormalize"] ? to_bool(dnode["renormalize"], "distribution.renormalize") : false;
  auto weights = per_outcome<double>(required(dnode, "distribution", "weights"), "distribution.weights", *space,
                                     to_number);
  std::optional<PossibilityDistribution> dist;
  try {
    dist = PossibilityDistribution::from_weights(space, std::move(weights),
                                                 renormalize ? Normalization::kRenormalize : Normalization::kStrict);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("distribution.weights: ") + e.what());
  }

  GeneratorSpec gen = parse_generator(root, *space);
  validate_generator(gen, space->size());

  Scenario s{.space = space, .distribution = std::move(*dist), .renormalize = renormalize, .generator = std::move(gen), .lln = {}};
  s.lln = parse_lln(root);
  parse_run(root, s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("", "cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "space" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "outcomes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& label : s.space->labels()) out << YAML::DoubleQuoted << label;
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "distribution" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
  for (std::size_t i = 0; i < s.space->size(); ++i)
    out << YAML::Key << YAML::DoubleQuoted << s.space->label(i) << YAML::Value << number_text(s.distribution[i]);
  out << YAML::EndMap;
  out << YAML::Key << "renormalize" << YAML::Value << (s.renormalize ? "true" : "false");
  out << YAML::EndMap;

  out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << std::string(family_name(s.generator));
  if (const auto* t = std::get_if<ExplicitTable>(&s.generator)) {
    out << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : t->rows) emit_numbers(out, row);
    out << YAML::EndSeq;
  } else if (const auto* a = std::get_if<AffineBasis>(&s.generator)) {
    out << YAML::Key << "coefficients" << YAML::Value << YAML::BeginMap;
    for (std::size_t i = 0; i < s.space->size(); ++i) {
      const auto& c = a->coefficients[i];
      out << YAML::Key << YAML::DoubleQuoted << s.space->label(i) << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "alpha" << YAML::Value << number_text(c.alpha);
      out << YAML::Key << "beta" << YAML::Value << number_text(c.beta);
      out << YAML::Key << "gamma" << YAML::Value << number_text(c.gamma);
      out << YAML::Key << "eta" << YAML::Value << number_text(c.eta);
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  } else if (const auto* u = std::get_if<SeededUniform>(&s.generator)) {
    out << YAML::Key << "seed" << YAML::Value << std::to_string(u->seed);
    out << YAML::Key << "base" << YAML::Value << YAML::BeginMap;
    for (std::size_t i = 0; i < s.space->size(); ++i)
      out << YAML::Key << YAML::DoubleQuoted << s.space->label(i) << YAML::Value << number_text(u->base[i]);
    out << YAML::EndMap;
    out << YAML::Key << "amp" << YAML::Value << YAML::BeginMap;
    for (std::size_t i = 0; i < s.space->size(); ++i)
      out << YAML::Key << YAML::DoubleQuoted << s.space->label(i) << YAML::Value << number_text(u->amp[i]);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  const auto& l = s.lln;
  if (l.theorem || l.psi || l.delta || l.constant) {
    out << YAML::Key << "lln" << YAML::Value << YAML::BeginMap;
    if (l.theorem) out << YAML::Key << "theorem" << YAML::Value << YAML::DoubleQuoted << std::string(to_string(*l.theorem));
    if (l.psi) {
      out << YAML::Key << "psi" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "family" << YAML::Value << std::string(to_string(l.psi->family()));
      if (l.psi->family() == PsiFunction::Family::kTable) {
        out << YAML::Key << "values" << YAML::Value;
        emit_numbers(out, l.psi->values());
      } else {
        out << YAML::Key << "delta" << YAML::Value << number_text(l.psi->delta());
        out << YAML::Key << "scale" << YAML::Value << number_text(l.psi->scale());
      }
      out << YAML::EndMap;
    }
    if (l.delta) out << YAML::Key << "delta" << YAML::Value << number_text(*l.delta);
    if (l.constant) out << YAML::Key << "C" << YAML::Value << number_text(*l.constant);
    out << YAML::EndMap;
  }

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << std::to_string(s.horizon);
  out << YAML::Key << "eps_grid" << YAML::Value;
  emit_numbers(out, s.eps_grid);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string document_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace possib
