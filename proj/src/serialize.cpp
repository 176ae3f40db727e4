#include "stumpcover/serialize.hpp"

#include "stumpcover/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace stumpcover {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw std::runtime_error(origin + ": " + msg);
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(part);
      part.clear();
    } else {
      part += c;
    }
  }
  parts.push_back(part);
  return parts;
}

double parse_double_or(const std::string& origin, const std::string& s) {
  double v;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(origin, "bad real value '" + s + "'");
  return v;
}

long long parse_int_or(const std::string& origin, const std::string& s) {
  long long v;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(origin, "bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string write_model(const LearnedModel& model) {
  std::ostringstream out;
  const bool soft = model.kind == LearnerKind::PacBayes || model.kind == LearnerKind::PacBayesFixed;
  out << "model " << to_string(model.kind) << ' ' << to_string(model.target) << " n=" << model.n
      << " stumps=" << model.size() << '\n';
  if (soft) {
    for (const auto& s : model.gibbs.stumps)
      out << s.attribute << ' ' << (s.direction > 0 ? "+1" : "-1") << ' ' << format_real17(s.a)
          << ' ' << format_real17(s.b) << '\n';
  } else {
    for (const auto& s : model.conjunction.stumps)
      out << s.attribute << ' ' << (s.direction > 0 ? "+1" : "-1") << ' '
          << format_real17(s.threshold) << '\n';
  }
  const auto& p = model.params;
  out << "meta penalty=" << format_real17(p.penalty) << '\n';
  out << "meta eta=" << format_real17(p.eta) << '\n';
  out << "meta v_max=" << p.v_max << '\n';
  if (model.kind == LearnerKind::PacBayesFixed) {
    out << "meta gamma=" << format_real17(p.gamma) << '\n';
    out << "meta gamma_fraction=" << (p.gamma_fraction ? 1 : 0) << '\n';
  }
  out << "meta prior=" << (p.prior.kind == SizePrior::Uniform ? "uniform" : "quadratic") << '\n';
  if (!model.bit_lengths.empty())
    out << "meta bits=" << join(model.bit_lengths, [](int v) { return std::to_string(v); }) << '\n';
  if (!model.code_indices.empty())
    out << "meta code_indices="
        << join(model.code_indices, [](Index v) { return std::to_string(v); }) << '\n';
  if (!model.gaps.empty())
    out << "meta gaps=" << join(model.gaps, [](const std::pair<double, double>& g) {
      return format_real17(g.first) + ":" + format_real17(g.second);
    }) << '\n';
  if (!model.anchors.empty())
    out << "meta anchors=" << join(model.anchors, [](Index v) { return std::to_string(v); })
        << '\n';
  if (!model.ratios.empty())
    out << "meta ratios=" << join(model.ratios, [](double v) { return format_real17(v); }) << '\n';
  if (model.label_names.size() == 2) {
    out << "meta label0=" << model.label_names[0] << '\n';
    out << "meta label1=" << model.label_names[1] << '\n';
  }
  return out.str();
}

void write_model_file(const std::filesystem::path& path, const LearnedModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out << write_model(model);
}

LearnedModel read_model(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) fail(origin, "empty model file");
  std::istringstream tag(line);
  std::string word, kind_s, target_s, n_kv, stumps_kv;
  if (!(tag >> word >> kind_s >> target_s >> n_kv >> stumps_kv) || word != "model")
    fail(origin, "bad model tag line: '" + line + "'");
  if (n_kv.rfind("n=", 0) != 0 || stumps_kv.rfind("stumps=", 0) != 0)
    fail(origin, "bad model tag line: '" + line + "'");

  LearnedModel model;
  model.kind = learner_kind_from_string(kind_s);
  model.target = target_from_string(target_s);
  model.n = parse_int_or(origin, n_kv.substr(2));
  const Index count = parse_int_or(origin, stumps_kv.substr(7));
  const bool soft = model.kind == LearnerKind::PacBayes || model.kind == LearnerKind::PacBayesFixed;

  for (Index i = 0; i < count; ++i) {
    if (!std::getline(in, line)) fail(origin, "truncated model: expected a stump line");
    std::istringstream ls(line);
    long long k;
    std::string d_s;
    if (!(ls >> k >> d_s)) fail(origin, "bad stump line: '" + line + "'");
    const int d = d_s == "+1" || d_s == "1" ? +1 : d_s == "-1" ? -1 : 0;
    if (d == 0) fail(origin, "bad direction '" + d_s + "'");
    if (k < 0 || k >= model.n) fail(origin, "stump attribute out of range: " + std::to_string(k));
    std::string f1, f2;
    if (!(ls >> f1)) fail(origin, "bad stump line: '" + line + "'");
    if (soft) {
      if (!(ls >> f2)) fail(origin, "interval stump needs both a and b: '" + line + "'");
      const double a = parse_double_or(origin, f1), b = parse_double_or(origin, f2);
      if (a > b) fail(origin, "interval stump with a > b: '" + line + "'");
      model.gibbs.stumps.push_back({static_cast<Index>(k), d, a, b});
    } else {
      model.conjunction.stumps.push_back({static_cast<Index>(k), d, parse_double_or(origin, f1)});
    }
  }

  std::string label0, label1;
  bool have_labels = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("meta ", 0) != 0) fail(origin, "unexpected line: '" + line + "'");
    const std::string kv = line.substr(5);
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(origin, "bad meta line: '" + line + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "penalty") model.params.penalty = parse_double_or(origin, value);
    else if (key == "eta") model.params.eta = parse_double_or(origin, value);
    else if (key == "v_max") model.params.v_max = parse_int_or(origin, value);
    else if (key == "gamma") model.params.gamma = parse_double_or(origin, value);
    else if (key == "gamma_fraction") model.params.gamma_fraction = value == "1";
    else if (key == "prior")
      model.params.prior = value == "uniform" ? SizePrior::uniform(model.n) : SizePrior::quadratic();
    else if (key == "bits")
      for (const auto& s : split(value, ','))
        model.bit_lengths.push_back(static_cast<int>(parse_int_or(origin, s)));
    else if (key == "code_indices")
      for (const auto& s : split(value, ',')) model.code_indices.push_back(parse_int_or(origin, s));
    else if (key == "gaps")
      for (const auto& s : split(value, ',')) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) fail(origin, "bad gap '" + s + "'");
        model.gaps.emplace_back(parse_double_or(origin, s.substr(0, colon)),
                                parse_double_or(origin, s.substr(colon + 1)));
      }
    else if (key == "anchors")
      for (const auto& s : split(value, ',')) model.anchors.push_back(parse_int_or(origin, s));
    else if (key == "ratios")
      for (const auto& s : split(value, ',')) model.ratios.push_back(parse_double_or(origin, s));
    else if (key == "label0") { label0 = value; have_labels = true; }
    else if (key == "label1") { label1 = value; have_labels = true; }
    // unknown meta keys are ignored for forward compatibility
  }
  if (have_labels) model.label_names = {label0, label1};
  return model;
}

LearnedModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  return read_model(in, path.string());
}

}  // namespace stumpcover
