#include "geograph/spacefile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace geograph::spacefile {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ParseError(field + ": " + msg);
}

const ordered_json& need(const ordered_json& j, const char* key,
                         const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at + "." + key, "missing field");
  return *it;
}

const ordered_json* maybe(const ordered_json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

int need_int(const ordered_json& j, const std::string& at) {
  if (!j.is_number_integer()) fail(at, "expected an integer");
  return j.get<int>();
}

std::string need_str(const ordered_json& j, const std::string& at) {
  if (!j.is_string()) fail(at, "expected a string");
  return j.get<std::string>();
}

const ordered_json& need_arr(const ordered_json& j, const std::string& at) {
  if (!j.is_array()) fail(at, "expected an array");
  return j;
}

bool is_identifier(const std::string& t) {
  if (t.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
    return false;
  for (const char c : t)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// A cell must be a rational literal (validated now, so "1/0" is reported at
/// its field) or the name of a declared parameter.
void check_cell(const std::string& cell, const SpaceFile& f,
                const std::string& at) {
  if (is_rational_literal(cell)) {
    parse_rational(cell, at);
    return;
  }
  if (!is_identifier(cell))
    fail(at, "neither a rational nor a parameter name: '" + cell + "'");
  if (f.params.find(cell) == f.params.end())
    fail(at, "undeclared parameter '" + cell + "'");
}

std::string cell_at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

SpaceFile parse_impl(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  SpaceFile f;

  const int sv = need_int(need(j, "schema_version", "document"), "schema_version");
  if (sv != 1)
    fail("schema_version", "unsupported version " + std::to_string(sv));
  f.schema_version = sv;

  f.name = need_str(need(j, "name", "document"), "name");
  if (f.name.empty()) fail("name", "must be nonempty");

  {
    const auto& labels = need_arr(need(j, "basis_labels", "document"), "basis_labels");
    for (std::size_t i = 0; i < labels.size(); ++i)
      f.alg.basis_labels.push_back(need_str(labels[i], cell_at("basis_labels", i)));
    f.alg.dim = static_cast<int>(f.alg.basis_labels.size());
    if (f.alg.dim == 0) fail("basis_labels", "must be nonempty");
  }

  {
    const auto& st = need_arr(need(j, "structure", "document"), "structure");
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string at = cell_at("structure", i);
      const auto& triple = need_arr(st[i], at);
      if (triple.size() != 3)
        fail(at, "expected [a, b, [[index, rational], ...]]");
      const int a = need_int(triple[0], at + "[0]");
      const int b = need_int(triple[1], at + "[1]");
      if (a < 0 || b < 0 || a >= f.alg.dim || b >= f.alg.dim)
        fail(at, "basis index out of range");
      if (a >= b) fail(at, "pairs must satisfy a < b");
      if (f.alg.structure.count({a, b})) fail(at, "duplicate pair");
      std::vector<std::pair<int, Rat>> terms;
      const auto& tl = need_arr(triple[2], at + "[2]");
      for (std::size_t t = 0; t < tl.size(); ++t) {
        const std::string tat = cell_at(at + "[2]", t);
        const auto& term = need_arr(tl[t], tat);
        if (term.size() != 2) fail(tat, "expected [index, rational]");
        const int idx = need_int(term[0], tat + "[0]");
        if (idx < 0 || idx >= f.alg.dim) fail(tat, "basis index out of range");
        terms.emplace_back(idx,
                           parse_rational(need_str(term[1], tat + "[1]"), tat + "[1]"));
      }
      f.alg.structure[{a, b}] = std::move(terms);
    }
  }

  auto index_list = [&](const char* key) {
    std::vector<int> out;
    const auto& arr = need_arr(need(j, key, "document"), key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const int v = need_int(arr[i], cell_at(key, i));
      if (v < 0 || v >= f.alg.dim) fail(cell_at(key, i), "index out of range");
      out.push_back(v);
    }
    return out;
  };
  f.h_indices = index_list("h_indices");
  f.m_indices = index_list("m_indices");

  {
    const auto& bl = need_arr(need(j, "blocks", "document"), "blocks");
    for (std::size_t i = 0; i < bl.size(); ++i) {
      const std::string at = cell_at("blocks", i);
      std::vector<int> block;
      const auto& arr = need_arr(bl[i], at);
      for (std::size_t t = 0; t < arr.size(); ++t)
        block.push_back(need_int(arr[t], cell_at(at, t)));
      f.blocks.push_back(std::move(block));
    }
  }

  {
    const auto& bf = need_arr(need(j, "block_forms", "document"), "block_forms");
    for (std::size_t i = 0; i < bf.size(); ++i) {
      const std::string at = cell_at("block_forms", i);
      const auto& rows = need_arr(bf[i], at);
      if (rows.empty()) fail(at, "empty matrix");
      const std::size_t n = rows.size();
      exact::RatMat M(static_cast<int>(n), static_cast<int>(n));
      for (std::size_t r = 0; r < n; ++r) {
        const std::string rat = cell_at(at, r);
        const auto& row = need_arr(rows[r], rat);
        if (row.size() != n) fail(rat, "matrix rows must have equal length");
        for (std::size_t c = 0; c < n; ++c)
          M.at(static_cast<int>(r), static_cast<int>(c)) =
              parse_rational(need_str(row[c], cell_at(rat, c)), cell_at(rat, c));
      }
      f.block_forms.push_back(std::move(M));
    }
  }

  if (const auto* pj = maybe(j, "params")) {
    if (!pj->is_object()) fail("params", "expected an object");
    for (auto it = pj->begin(); it != pj->end(); ++it) {
      if (!is_identifier(it.key()))
        fail("params", "parameter name '" + it.key() + "' is not an identifier");
      f.params[it.key()] =
          parse_rational(need_str(it.value(), "params." + it.key()),
                         "params." + it.key());
    }
  }

  {
    const auto& nj = need(j, "norm", "document");
    f.family = need_str(need(nj, "family", "norm"), "norm.family");
    if (f.family != "weighted_squares" && f.family != "qpower" &&
        f.family != "randers_like")
      fail("norm.family",
           "unknown family '" + f.family +
               "' (expected weighted_squares, qpower or randers_like)");
    if (const auto* qj = maybe(nj, "q")) f.q = need_str(*qj, "norm.q");
    check_cell(f.q, f, "norm.q");

    const auto& ms = need_arr(need(nj, "metrics", "norm"), "norm.metrics");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string at = cell_at("norm.metrics", i);
      std::vector<std::string> tuple;
      const auto& arr = need_arr(ms[i], at);
      for (std::size_t t = 0; t < arr.size(); ++t) {
        tuple.push_back(need_str(arr[t], cell_at(at, t)));
        check_cell(tuple.back(), f, cell_at(at, t));
      }
      f.metrics.push_back(std::move(tuple));
    }

    auto cell_list = [&](const char* key, std::vector<std::string>& out) {
      if (const auto* wj = maybe(nj, key)) {
        const std::string base = std::string("norm.") + key;
        const auto& arr = need_arr(*wj, base);
        for (std::size_t i = 0; i < arr.size(); ++i) {
          out.push_back(need_str(arr[i], cell_at(base, i)));
          check_cell(out.back(), f, cell_at(base, i));
        }
      }
    };
    cell_list("metric_weights", f.metric_weights);

    if (const auto* fj = maybe(nj, "forms")) {
      const auto& arr = need_arr(*fj, "norm.forms");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = cell_at("norm.forms", i);
        FormCells fc;
        fc.name = need_str(need(arr[i], "name", at), at + ".name");
        const auto& cov = need_arr(need(arr[i], "covector", at), at + ".covector");
        for (std::size_t t = 0; t < cov.size(); ++t) {
          fc.covector.push_back(need_str(cov[t], cell_at(at + ".covector", t)));
          check_cell(fc.covector.back(), f, cell_at(at + ".covector", t));
        }
        f.forms.push_back(std::move(fc));
      }
    }
    cell_list("form_weights", f.form_weights);
  }

  if (const auto* fj = maybe(j, "flags")) {
    const auto& arr = need_arr(*fj, "flags");
    for (std::size_t i = 0; i < arr.size(); ++i)
      f.flags.push_back(need_str(arr[i], cell_at("flags", i)));
  }

  // Semantic layer: the file must build a valid space, the block forms must
  // fit it, and the norm must be well-formed at the default parameters.
  const algebra::Space s = make_space(f);
  const algebra::ValidationReport rep = s.validate();
  if (!rep.ok())
    fail("space", rep.issues.front().invariant + ", witness " +
                      rep.issues.front().witness);
  const metrics::BlockForms bf = make_block_forms(f);
  bf.check(s);
  const metrics::NormSpec n = make_norm(f, f.params);
  const std::vector<std::string> issues = metrics::validate_norm(s, bf, n);
  if (!issues.empty()) fail("norm", issues.front());
  return f;
}

Rat resolve_cell(const std::string& cell, const ParamMap& values,
                 const std::string& at) {
  if (is_rational_literal(cell)) return parse_rational(cell, at);
  auto it = values.find(cell);
  if (it == values.end()) fail(at, "undeclared parameter '" + cell + "'");
  return it->second;
}

}  // namespace

Rat parse_rational(const std::string& text, const std::string& field) {
  if (!is_rational_literal(text))
    fail(field, "not a rational literal: '" + text + "'");
  try {
    return rat_parse(text);
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
}

bool is_rational_literal(const std::string& text) {
  std::size_t i = text.size() > 0 && text[0] == '-' ? 1 : 0;
  if (i >= text.size()) return false;
  bool digits = false, slash = false, den_digits = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      (slash ? den_digits : digits) = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
    } else {
      return false;
    }
  }
  return digits && (!slash || den_digits);
}

ParamMap resolve_params(const SpaceFile& f,
                        const std::map<std::string, std::string>& overrides) {
  ParamMap out = f.params;
  for (const auto& [k, v] : overrides) {
    auto it = out.find(k);
    if (it == out.end())
      fail("--param", "unknown parameter '" + k + "' for space '" + f.name + "'");
    it->second = parse_rational(v, "--param " + k);
  }
  return out;
}

algebra::Space make_space(const SpaceFile& f) {
  algebra::ReductiveSplit split;
  split.h_indices = f.h_indices;
  split.m_indices = f.m_indices;
  algebra::ModuleSplit ms;
  ms.blocks = f.blocks;
  return algebra::Space(f.alg, split, ms);
}

metrics::BlockForms make_block_forms(const SpaceFile& f) {
  metrics::BlockForms bf;
  for (const auto& M : f.block_forms) bf.forms.push_back({M});
  return bf;
}

metrics::NormSpec make_norm(const SpaceFile& f, const ParamMap& values) {
  metrics::NormSpec n;
  if (f.family == "weighted_squares")
    n.family = metrics::Family::WeightedSquares;
  else if (f.family == "qpower")
    n.family = metrics::Family::QPower;
  else if (f.family == "randers_like")
    n.family = metrics::Family::RandersLike;
  else
    fail("norm.family", "unknown family '" + f.family + "'");
  n.q = rat_double(resolve_cell(f.q, values, "norm.q"));
  for (std::size_t i = 0; i < f.metrics.size(); ++i) {
    metrics::MetricParams mp;
    for (std::size_t t = 0; t < f.metrics[i].size(); ++t)
      mp.c.push_back(resolve_cell(f.metrics[i][t], values,
                                  cell_at(cell_at("norm.metrics", i), t)));
    n.metrics.push_back(std::move(mp));
  }
  for (std::size_t i = 0; i < f.metric_weights.size(); ++i)
    n.metric_weights.push_back(resolve_cell(f.metric_weights[i], values,
                                            cell_at("norm.metric_weights", i)));
  for (std::size_t i = 0; i < f.forms.size(); ++i) {
    metrics::OneFormSpec fs;
    fs.name = f.forms[i].name;
    const std::string at = cell_at("norm.forms", i) + ".covector";
    for (std::size_t t = 0; t < f.forms[i].covector.size(); ++t)
      fs.covector.push_back(resolve_cell(f.forms[i].covector[t], values,
                                         cell_at(at, t)));
    n.forms.push_back(std::move(fs));
  }
  for (std::size_t i = 0; i < f.form_weights.size(); ++i)
    n.form_weights.push_back(resolve_cell(f.form_weights[i], values,
                                          cell_at("norm.form_weights", i)));
  return n;
}

SpaceFile parse_space_text(const std::string& text, const std::string& source) {
  try {
    return parse_impl(text);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

SpaceFile parse_space_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space_text(buf.str(), path);
}

std::string serialize(const SpaceFile& f) {
  ordered_json j;
  j["schema_version"] = f.schema_version;
  j["name"] = f.name;
  j["basis_labels"] = f.alg.basis_labels;
  ordered_json st = ordered_json::array();
  for (const auto& [ab, terms] : f.alg.structure) {
    ordered_json tl = ordered_json::array();
    for (const auto& [idx, c] : terms)
      tl.push_back(ordered_json::array({idx, rat_str(c)}));
    st.push_back(ordered_json::array({ab.first, ab.second, tl}));
  }
  j["structure"] = std::move(st);
  j["h_indices"] = f.h_indices;
  j["m_indices"] = f.m_indices;
  j["blocks"] = f.blocks;
  ordered_json bf = ordered_json::array();
  for (const auto& M : f.block_forms) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < M.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (int c = 0; c < M.cols(); ++c) row.push_back(rat_str(M.at(r, c)));
      rows.push_back(std::move(row));
    }
    bf.push_back(std::move(rows));
  }
  j["block_forms"] = std::move(bf);
  ordered_json pj = ordered_json::object();
  for (const auto& [k, v] : f.params) pj[k] = rat_str(v);
  j["params"] = std::move(pj);
  ordered_json nj;
  nj["family"] = f.family;
  if (f.family == "qpower") nj["q"] = f.q;
  nj["metrics"] = f.metrics;
  if (!f.metric_weights.empty()) nj["metric_weights"] = f.metric_weights;
  if (!f.forms.empty()) {
    ordered_json fj = ordered_json::array();
    for (const auto& fc : f.forms)
      fj.push_back(ordered_json{{"name", fc.name}, {"covector", fc.covector}});
    nj["forms"] = std::move(fj);
  }
  if (!f.form_weights.empty()) nj["form_weights"] = f.form_weights;
  j["norm"] = std::move(nj);
  j["flags"] = f.flags;
  return j.dump(2) + "\n";
}

}  // namespace geograph::spacefile
