#include "advloss/serialize.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "advloss/errors.hpp"

namespace advloss::serialize {

using nlohmann::json;

namespace {

// 17 significant digits: enough to round-trip any double.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json index_to_json(const basis::BasisIndex& z) {
  json arr = json::array();
  if (z.tag() == basis::BasisIndex::Tag::Fourier) {
    for (int k : z.freq()) arr.push_back(k);
  } else if (z.tag() == basis::BasisIndex::Tag::Haar) {
    arr.push_back(z.level());
    arr.push_back(z.position());
  }
  return arr;
}

basis::BasisIndex index_from_json(const json& arr, basis::BasisKind kind,
                                  int dim) {
  if (!arr.is_array())
    throw input_error("coefficient index must be an array of integers");
  if (kind == basis::BasisKind::Haar) {
    if (arr.size() != 2)
      throw input_error("haar index must be [level, position]");
    return basis::BasisIndex::haar(arr[0].get<int>(), arr[1].get<int>());
  }
  if (static_cast<int>(arr.size()) != dim)
    throw input_error("fourier index arity does not match d");
  std::vector<int> freq;
  freq.reserve(arr.size());
  for (const auto& v : arr) freq.push_back(v.get<int>());
  return basis::BasisIndex::fourier(std::move(freq));
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw input_error(std::string("malformed JSON in ") + what);
  return j;
}

void check_schema(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw input_error(std::string(what) +
                      ": missing or unsupported schema_version");
}

}  // namespace

std::string density_to_json(const density::SeriesDensity& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = p.dim();
  j["basis"] = basis::to_string(p.kind());
  json coeffs = json::array();
  for (const auto& [z, c] : p.coefficients())
    coeffs.push_back(json::array({index_to_json(z), c}));
  j["coeffs"] = std::move(coeffs);
  return j.dump(2) + "\n";
}

density::SeriesDensity density_from_json(const std::string& text) {
  const json j = parse(text, "density");
  check_schema(j, "density");
  if (!j.contains("d") || !j.contains("basis") || !j.contains("coeffs"))
    throw input_error("density JSON needs fields d, basis, coeffs");
  const int d = j["d"].get<int>();
  const auto kind = basis::basis_kind_from_string(j["basis"].get<std::string>());
  basis::CoefficientVector coeffs;
  for (const auto& entry : j["coeffs"]) {
    if (!entry.is_array() || entry.size() != 2)
      throw input_error("each coeff must be [[index...], value]");
    coeffs[index_from_json(entry[0], kind, d)] = entry[1].get<double>();
  }
  try {
    return density::SeriesDensity(d, kind, std::move(coeffs));
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("density JSON invalid: ") + e.what());
  }
}

std::string dataset_to_csv(const Dataset& data) {
  std::ostringstream os;
  for (int j = 0; j < data.dim; ++j) os << (j ? "," : "") << "x" << (j + 1);
  os << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto pt = data.point(i);
    for (std::size_t j = 0; j < pt.size(); ++j)
      os << (j ? "," : "") << fmt17(pt[j]);
    os << "\n";
  }
  return os.str();
}

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw input_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  // header: x1,...,xd
  int d = 0;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      ++d;
      const std::string expected = "x" + std::to_string(d);
      if (col != expected)
        throw input_error("CSV header column " + std::to_string(d) +
                          " is '" + col + "', expected '" + expected + "'");
    }
  }
  if (d == 0) throw input_error("CSV header has no columns");

  Dataset data;
  data.dim = d;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    int got = 0;
    while (std::getline(ls, cell, ',')) {
      double v;
      const auto* b = cell.data();
      const auto [ptr, ec] = std::from_chars(b, b + cell.size(), v);
      if (ec != std::errc() || ptr != b + cell.size())
        throw input_error("CSV row " + std::to_string(row) +
                          ": cannot parse value '" + cell + "'");
      if (!(v >= 0.0 && v <= 1.0))
        throw input_error("CSV row " + std::to_string(row) +
                          ": value " + cell + " outside [0,1]");
      data.flat.push_back(v);
      ++got;
    }
    if (got != d)
      throw input_error("CSV row " + std::to_string(row) + " has " +
                        std::to_string(got) + " columns, expected " +
                        std::to_string(d));
  }
  if (data.empty()) throw input_error("CSV contains no data rows");
  return data;
}

namespace {

montecarlo::TruthSpec truth_from_json(const json& j) {
  montecarlo::TruthSpec spec;
  const auto kind = j.value("kind", std::string("fixed-modes"));
  if (kind == "fixed-modes") {
    spec.kind = montecarlo::TruthSpec::Kind::FixedModes;
    spec.mode_count = j.value("modes", 6);
    spec.coef_min = j.value("coef_min", 0.05);
    spec.coef_max = j.value("coef_max", 0.12);
    spec.freq_cap = j.value("freq_cap", 8);
  } else if (kind == "growing") {
    spec.kind = montecarlo::TruthSpec::Kind::Growing;
    spec.t = j.value("t", 1.0);
    spec.epsilon = j.value("epsilon", 0.05);
    spec.mass_budget = j.value("mass_budget", 0.9);
  } else if (kind == "explicit") {
    spec.kind = montecarlo::TruthSpec::Kind::Explicit;
    if (!j.contains("density"))
      throw input_error("explicit truth needs a 'density' object");
    spec.explicit_density = density_from_json(j["density"].dump());
  } else {
    throw input_error("unknown truth kind: " + kind);
  }
  return spec;
}

json truth_to_json(const montecarlo::TruthSpec& spec) {
  json j;
  switch (spec.kind) {
    case montecarlo::TruthSpec::Kind::FixedModes:
      j["kind"] = "fixed-modes";
      j["modes"] = spec.mode_count;
      j["coef_min"] = spec.coef_min;
      j["coef_max"] = spec.coef_max;
      j["freq_cap"] = spec.freq_cap;
      break;
    case montecarlo::TruthSpec::Kind::Growing:
      j["kind"] = "growing";
      j["t"] = spec.t;
      j["epsilon"] = spec.epsilon;
      j["mass_budget"] = spec.mass_budget;
      break;
    case montecarlo::TruthSpec::Kind::Explicit:
      j["kind"] = "explicit";
      j["density"] = json::parse(density_to_json(*spec.explicit_density));
      break;
  }
  return j;
}

montecarlo::LossSpec loss_from_json(const json& j) {
  montecarlo::LossSpec spec;
  spec.p = j.value("p", 2.0);
  spec.radius = j.value("radius", 1.0);
  const auto weights = j.value("weights", json{{"kind", "sobolev"}, {"s", 0.0}});
  const auto kind = weights.value("kind", std::string("sobolev"));
  if (kind == "sobolev") {
    spec.spectral = false;
    spec.sobolev_s = weights.value("s", 0.0);
  } else if (kind == "geometric-spectrum") {
    spec.spectral = true;
    spec.spectrum_ratio = weights.value("ratio", 0.5);
    spec.spectrum_zmax = weights.value("zmax", 30);
  } else {
    throw input_error("unknown loss weight kind: " + kind);
  }
  return spec;
}

json loss_to_json(const montecarlo::LossSpec& spec) {
  json w;
  if (spec.spectral) {
    w["kind"] = "geometric-spectrum";
    w["ratio"] = spec.spectrum_ratio;
    w["zmax"] = spec.spectrum_zmax;
  } else {
    w["kind"] = "sobolev";
    w["s"] = spec.sobolev_s;
  }
  return json{{"p", spec.p}, {"radius", spec.radius}, {"weights", w}};
}

montecarlo::ZetaRule zeta_rule_from_json(const json& j) {
  const auto kind = j.value("kind", std::string("support"));
  if (kind == "support") return montecarlo::ZetaRule::support();
  if (kind == "fixed") return montecarlo::ZetaRule::fixed(j.value("zeta", 0));
  if (kind == "oracle") return montecarlo::ZetaRule::oracle(j.value("t", 1.0));
  if (kind == "adaptive")
    return montecarlo::ZetaRule::adaptive(j.value("zeta_max", 64));
  throw input_error("unknown zeta rule: " + kind);
}

json zeta_rule_to_json(const montecarlo::ZetaRule& rule) {
  using K = montecarlo::ZetaRule::Kind;
  switch (rule.kind) {
    case K::Support:
      return json{{"kind", "support"}};
    case K::Fixed:
      return json{{"kind", "fixed"}, {"zeta", rule.zeta}};
    case K::Oracle:
      return json{{"kind", "oracle"}, {"t", rule.t}};
    case K::Adaptive:
      return json{{"kind", "adaptive"}, {"zeta_max", rule.zeta_max}};
  }
  return {};
}

}  // namespace

montecarlo::ExperimentConfig experiment_config_from_json(
    const std::string& text) {
  const json j = parse(text, "experiment config");
  check_schema(j, "experiment config");
  montecarlo::ExperimentConfig cfg;
  cfg.regime = j.value("regime", std::string("custom"));
  if (cfg.regime == "parametric")
    cfg = montecarlo::ExperimentConfig::parametric();
  else if (cfg.regime == "nonparametric")
    cfg = montecarlo::ExperimentConfig::nonparametric();
  cfg.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("n_grid"))
    cfg.n_grid = j["n_grid"].get<std::vector<std::size_t>>();
  if (j.contains("replications"))
    cfg.replications = j["replications"].get<int>();
  if (j.contains("truth")) cfg.truth = truth_from_json(j["truth"]);
  if (j.contains("loss")) cfg.loss = loss_from_json(j["loss"]);
  if (j.contains("zeta_rule")) cfg.zeta_rule = zeta_rule_from_json(j["zeta_rule"]);
  cfg.workers = j.value("workers", cfg.workers);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("experiment config invalid: ") + e.what());
  }
  return cfg;
}

std::string experiment_config_to_json(const montecarlo::ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["regime"] = cfg.regime;
  j["seed"] = cfg.seed;
  j["n_grid"] = cfg.n_grid;
  j["replications"] = cfg.replications;
  j["truth"] = truth_to_json(cfg.truth);
  j["loss"] = loss_to_json(cfg.loss);
  j["zeta_rule"] = zeta_rule_to_json(cfg.zeta_rule);
  j["workers"] = cfg.workers;
  return j.dump(2) + "\n";
}

std::string risk_curve_to_csv(const montecarlo::RiskCurve& curve) {
  std::ostringstream os;
  os << "n,mean_risk,stderr,replications\n";
  for (const auto& pt : curve.points)
    os << pt.n << "," << fmt17(pt.mean) << "," << fmt17(pt.std_error) << ","
       << pt.replications << "\n";
  return os.str();
}

std::string risk_curve_summary_json(const montecarlo::RiskCurve& curve,
                                    const std::string& regime) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["regime"] = regime;
  j["slope"] = curve.slope;
  j["intercept"] = curve.intercept;
  j["residual_rms"] = curve.residual_rms;
  return j.dump(2) + "\n";
}

std::string risk_curve_to_svg(const montecarlo::RiskCurve& curve,
                              const std::string& title) {
  const double W = 560, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& pt : curve.points) {
    const double x = std::log10(static_cast<double>(pt.n));
    const double y = std::log10(std::max(pt.mean, 1e-300));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  const auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  const auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">"
     << title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">log10 n</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 16 "
     << (mt + H - mb) / 2 << ")\">log10 risk</text>\n";
  // fitted line
  {
    const double lx0 = xmin, lx1 = xmax;
    const double ln10 = std::log(10.0);
    const auto fit_y = [&](double lx) {
      return (curve.intercept + curve.slope * lx * ln10) / ln10;
    };
    os << "<line x1=\"" << px(lx0) << "\" y1=\"" << py(fit_y(lx0))
       << "\" x2=\"" << px(lx1) << "\" y2=\"" << py(fit_y(lx1))
       << "\" stroke=\"#d62728\" stroke-dasharray=\"5,4\"/>\n";
  }
  // points
  for (const auto& pt : curve.points) {
    const double x = px(std::log10(static_cast<double>(pt.n)));
    const double y = py(std::log10(std::max(pt.mean, 1e-300)));
    os << "<circle cx=\"" << x << "\" cy=\"" << y
       << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  }
  os << "<text x=\"" << W - mr << "\" y=\"" << mt + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
        "fill=\"#d62728\">slope "
     << fmt6(curve.slope) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string upper_bound_to_json(const bounds::UpperBoundReport& rep) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["variance"] = rep.variance;
  j["bias"] = rep.bias;
  j["total"] = rep.total;
  j["constant_unspecified"] = rep.constant_unspecified;
  j["bias_tail_remainder"] = rep.bias_tail_remainder;
  j["zeta"] = rep.zeta;
  j["set_size"] = rep.set_size;
  j["n"] = rep.n;
  return j.dump(2) + "\n";
}

std::string lower_bound_to_json(const bounds::LowerBoundReport& rep) {
  const auto cond = [](const bounds::LowerBoundCondition& c) {
    return json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs},
                {"holds", c.holds}};
  };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["applicable"] = rep.applicable;
  j["value"] = rep.value;
  j["A_Z"] = rep.A_Z;
  j["B_Z"] = rep.B_Z;
  j["amplitude_g"] = rep.amplitude_g;
  j["amplitude_d"] = rep.amplitude_d;
  j["information_condition"] = cond(rep.information_condition);
  j["density_condition"] = cond(rep.density_condition);
  return j.dump(2) + "\n";
}

std::string rate_to_json(const bounds::RateSpec& rate) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["s"] = rate.s;
  j["t"] = rate.t;
  j["d"] = rate.d;
  j["exponent"] = rate.exponent;
  j["parametric"] = rate.parametric;
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw input_error("cannot open file: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace advloss::serialize
