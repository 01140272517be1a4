#include "wielandt/serialize.hpp"

#include <fstream>
#include <memory>

namespace wielandt {

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorKind::Format, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) format_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Eigen::Index index_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) format_error(std::string("field \"") + key + "\" must be a non-negative integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json matrix_to_json(const CMatrix& x) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      re.push_back(x(i, j).real());
      im.push_back(x(i, j).imag());
    }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j) {
  const Eigen::Index rows = index_field(j, "rows"), cols = index_field(j, "cols");
  const json& re = field(j, "re");
  const json& im = field(j, "im");
  const auto count = static_cast<std::size_t>(rows * cols);
  if (!re.is_array() || !im.is_array() || re.size() != count || im.size() != count)
    format_error("matrix \"re\"/\"im\" must be arrays of rows*cols numbers");
  CMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      if (!re[idx].is_number() || !im[idx].is_number()) format_error("matrix entries must be numbers");
      x(i, k) = Complex(re[idx].get<double>(), im[idx].get<double>());
    }
  require_finite(x, "matrix");
  return x;
}

json map_to_json(const PositiveMap& phi) {
  return std::visit(
      [&](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, IdentityRep>) {
          return {{"type", "identity"}, {"dim", r.dim}};
        } else if constexpr (std::is_same_v<R, CompressionRep>) {
          return {{"type", "compression"}, {"V", matrix_to_json(r.v)}};
        } else if constexpr (std::is_same_v<R, KrausRep>) {
          json ops = json::array();
          for (const auto& k : r.ops) ops.push_back(matrix_to_json(k));
          return {{"type", "kraus"}, {"ops", std::move(ops)}};
        } else if constexpr (std::is_same_v<R, StinespringRep>) {
          return {{"type", "stinespring"}, {"ancilla", r.ancilla}, {"W", matrix_to_json(r.w)}};
        } else if constexpr (std::is_same_v<R, ConvexRep>) {
          json terms = json::array();
          for (const auto& t : r.terms) terms.push_back({{"weight", t.weight}, {"map", map_to_json(*t.map)}});
          return {{"type", "convex"}, {"terms", std::move(terms)}};
        } else {
          return {{"type", "linear_action"},
                  {"in_dim", r.in_dim},
                  {"out_dim", r.out_dim},
                  {"action", matrix_to_json(r.action)}};
        }
      },
      phi.rep());
}

PositiveMap map_from_json(const json& j) {
  const json& type = field(j, "type");
  if (!type.is_string()) format_error("map \"type\" must be a string");
  const std::string t = type.get<std::string>();
  if (t == "identity") return PositiveMap::identity(index_field(j, "dim"));
  if (t == "compression") return PositiveMap::compression(matrix_from_json(field(j, "V")));
  if (t == "kraus") {
    std::vector<CMatrix> ops;
    for (const auto& k : field(j, "ops")) ops.push_back(matrix_from_json(k));
    return PositiveMap::kraus(std::move(ops));
  }
  if (t == "stinespring") return PositiveMap::stinespring(matrix_from_json(field(j, "W")), index_field(j, "ancilla"));
  if (t == "convex") {
    std::vector<ConvexTerm> terms;
    for (const auto& term : field(j, "terms")) {
      const json& w = field(term, "weight");
      if (!w.is_number()) format_error("convex weight must be a number");
      terms.push_back({w.get<double>(), std::make_shared<const PositiveMap>(map_from_json(field(term, "map")))});
    }
    return PositiveMap::convex(std::move(terms));
  }
  if (t == "linear_action")
    return PositiveMap::linear_action(index_field(j, "in_dim"), index_field(j, "out_dim"),
                                      matrix_from_json(field(j, "action")));
  format_error("unknown map type \"" + t + "\"");
}

json instance_to_json(const Instance& inst) {
  return {{"seed", inst.seed},
          {"dims", {{"N", inst.ambient()}, {"n", inst.n()}, {"d", inst.d()}}},
          {"m", inst.m},
          {"M", inst.big_m},
          {"A", matrix_to_json(inst.a.matrix())},
          {"X", matrix_to_json(inst.x.matrix())},
          {"Y", matrix_to_json(inst.y.matrix())},
          {"map", map_to_json(inst.phi)}};
}

Instance instance_from_json(const json& j) {
  const json& seed = field(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) format_error("seed must be an integer");
  const json& m = field(j, "m");
  const json& big_m = field(j, "M");
  if (!m.is_number() || !big_m.is_number()) format_error("m and M must be numbers");
  Instance inst{HermMatrix(matrix_from_json(field(j, "A"))),
                m.get<double>(),
                big_m.get<double>(),
                Isometry(matrix_from_json(field(j, "X"))),
                Isometry(matrix_from_json(field(j, "Y"))),
                map_from_json(field(j, "map")),
                seed.get<std::uint64_t>()};
  inst.validate();
  return inst;
}

json report_to_json(const CheckReport& r) {
  json dims = nullptr;
  if (r.dims) dims = {{"N", (*r.dims)[0]}, {"n", (*r.dims)[1]}, {"d", (*r.dims)[2]}};
  json out{{"check", r.check},
           {"lhs", r.lhs},
           {"bound", r.bound},
           {"margin", r.margin},
           {"loewner_pass", r.loewner_pass},
           {"norm_pass", r.norm_pass},
           {"tol", r.tol},
           {"seed", r.seed ? json(*r.seed) : json(nullptr)},
           {"dims", std::move(dims)},
           {"m", optional_number(r.m)},
           {"M", optional_number(r.big_m)},
           {"p", optional_number(r.p)}};
  if (r.witness) out["witness_eigenvalue"] = r.witness->eigenvalue;
  return out;
}

json config_to_json(const SearchConfig& cfg) {
  return {{"objective", to_string(cfg.objective)},
          {"dims", {{"N", cfg.dims.big_n}, {"n", cfg.dims.n}, {"d", cfg.dims.d}, {"k", cfg.dims.k}}},
          {"m", cfg.m},
          {"M", cfg.big_m},
          {"p", cfg.objective == Objective::Conjecture ? json(nullptr) : json(cfg.p)},
          {"trials", cfg.trials},
          {"refine_steps", cfg.refine_steps},
          {"seed", cfg.seed},
          {"tol", cfg.tol}};
}

json search_to_json(const SearchRecord& rec, const SearchConfig& cfg) {
  json trace = json::array();
  for (const auto& t : rec.trace) trace.push_back({{"step", t.step}, {"value", t.value}});
  return {{"objective", to_string(cfg.objective)},
          {"best_value", rec.best_value},
          {"best_trial", rec.best_trial},
          {"trials", rec.trials_done},
          {"failed_trials", rec.failed_trials},
          {"config", config_to_json(cfg)},
          {"best_instance", instance_to_json(rec.best_instance)},
          {"trace", std::move(trace)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    format_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) format_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace wielandt
