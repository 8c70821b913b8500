// weil-mass: command-line front end over the weilmass library.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "weilmass/characters.hpp"
#include "weilmass/classnumber.hpp"
#include "weilmass/gsp4.hpp"
#include "weilmass/localfactors.hpp"
#include "weilmass/weil.hpp"

using namespace weilmass;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "weil-mass/1";

struct PolyArgs {
  std::int64_t p = 0;
  int e = 1;
  std::optional<std::int64_t> a, b, c3, c2;
};

struct Common {
  std::string format = "json";
  std::string out;
  std::string cache;
  int digits = 20;
  unsigned jobs = 1;
};

// Command output: scalar fields plus at most one table, rendered as json, csv or pretty text.
struct Result {
  Json doc = Json::object();
  std::string table_key;
  int exit_code = 0;
};

void add_poly(CLI::App* sub, PolyArgs& pa, bool required = true) {
  auto* p = sub->add_option("-p,--prime", pa.p, "characteristic p");
  if (required) p->required();
  sub->add_option("-e,--exponent", pa.e, "q = p^e")->capture_default_str();
  sub->add_option("-a", pa.a, "a in T^4 - aT^3 + bT^2 - aqT + q^2");
  sub->add_option("-b", pa.b, "b in T^4 - aT^3 + bT^2 - aqT + q^2");
  sub->add_option("--c3", pa.c3, "displayed coefficient of T^3 (a = -c3)");
  sub->add_option("--c2", pa.c2, "displayed coefficient of T^2 (b = c2)");
}

WeilPolynomial make_poly(const PolyArgs& pa) {
  if (pa.a && pa.c3) throw Error(ErrorKind::InvalidArgument, "give either -a or --c3, not both");
  if (pa.b && pa.c2) throw Error(ErrorKind::InvalidArgument, "give either -b or --c2, not both");
  if (!(pa.a || pa.c3) || !(pa.b || pa.c2)) throw Error(ErrorKind::InvalidArgument, "polynomial needs a and b");
  const std::int64_t a = pa.a ? *pa.a : -*pa.c3;
  const std::int64_t b = pa.b ? *pa.b : *pa.c2;
  return WeilPolynomial::make(pa.p, pa.e, a, b);
}

std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size() || v < 1 || v > 1e12 || v != std::floor(v))
    throw Error(ErrorKind::InvalidArgument, "not a positive integer: " + s);
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_cutoffs(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(item));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw Error(ErrorKind::InvalidArgument, "cutoffs must be strictly increasing");
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty cutoff ladder");
  return out;
}

std::string decimal(const BigFloat& x, int digits) { return x.str(digits, std::ios_base::scientific); }

Json poly_json(const WeilPolynomial& w) {
  return Json{{"p", w.p}, {"e", w.e}, {"a", w.a}, {"b", w.b}, {"display", w.to_string()}};
}

Json big(const BigInt& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Json rational_fields(const BigRational& r) { return Json{{"num", big(r.get_num())}, {"den", big(r.get_den())}}; }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return 2;
    case ErrorKind::Identification: return 3;
    case ErrorKind::Integrality: return 4;
    case ErrorKind::OracleMismatch: return 5;
    case ErrorKind::InvalidArgument: return 64;
    case ErrorKind::Budget: return 6;
  }
  return 1;
}

std::filesystem::path cache_dir(const Common& c) {
  return c.cache.empty() ? gsp4::default_cache_dir() : std::filesystem::path(c.cache);
}

// Ordered map over inputs with a bounded number of concurrent workers; output order is input order.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& in, unsigned jobs, Fn fn) {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
    return out;
  }
  for (std::size_t start = 0; start < in.size(); start += jobs) {
    std::vector<std::future<Out>> batch;
    const std::size_t end = std::min(in.size(), start + jobs);
    for (std::size_t i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, std::cref(in[i])));
    for (std::size_t i = start; i < end; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

// Rendering.

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render(const Result& r, const Common& c, std::ostream& os) {
  Json doc = Json::object();
  doc["schema"] = kSchema;
  for (auto it = r.doc.begin(); it != r.doc.end(); ++it) doc[it.key()] = it.value();
  if (c.format == "json") {
    os << doc.dump(2) << "\n";
    return;
  }
  const Json* table = r.table_key.empty() ? nullptr : &r.doc.at(r.table_key);
  if (c.format == "csv") {
    if (table && !table->empty()) {
      std::vector<std::string> keys;
      for (auto it = table->front().begin(); it != table->front().end(); ++it) keys.push_back(it.key());
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
      os << "\n";
      for (const auto& row : *table) {
        for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << (row.contains(keys[i]) ? cell(row[keys[i]]) : "");
        os << "\n";
      }
    } else {
      os << "key,value\n";
      for (auto it = doc.begin(); it != doc.end(); ++it) os << it.key() << "," << cell(it.value()) << "\n";
    }
    return;
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == r.table_key) continue;
    os << std::left << std::setw(22) << it.key() << cell(it.value()) << "\n";
  }
  if (table && !table->empty()) {
    std::vector<std::string> keys;
    for (auto it = table->front().begin(); it != table->front().end(); ++it) keys.push_back(it.key());
    std::vector<std::size_t> width(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      width[i] = keys[i].size();
      for (const auto& row : *table) width[i] = std::max(width[i], row.contains(keys[i]) ? cell(row[keys[i]]).size() : 0);
    }
    os << "\n";
    for (std::size_t i = 0; i < keys.size(); ++i) os << std::left << std::setw(static_cast<int>(width[i] + 2)) << keys[i];
    os << "\n";
    for (const auto& row : *table) {
      for (std::size_t i = 0; i < keys.size(); ++i)
        os << std::left << std::setw(static_cast<int>(width[i] + 2)) << (row.contains(keys[i]) ? cell(row[keys[i]]) : "");
      os << "\n";
    }
  }
}

// Commands.

Json validation_json(const ValidationReport& v) {
  Json j{{"passed", v.passed()},
         {"in_weil_region", v.in_weil_region},
         {"ordinary", v.ordinary},
         {"irreducible", v.irreducible},
         {"galois_type", v.galois_type ? to_string(*v.galois_type) : "unknown"},
         {"unramified_at_p", v.unramified_at_p},
         {"maximal", v.maximal},
         {"polarizable", "asserted by user"}};
  if (v.delta_order) j["delta_order"] = big(*v.delta_order);
  if (v.delta_k) j["delta_k"] = big(*v.delta_k);
  j["failures"] = v.failures;
  return j;
}

Result cmd_validate(const WeilPolynomial& w) {
  Result r;
  const auto v = validate(w);
  const auto inv = invariants(w);
  r.doc["polynomial"] = poly_json(w);
  r.doc["delta_fplus"] = big(inv.delta_fplus);
  r.doc["delta_order"] = big(inv.delta_order);
  r.doc["delta_f"] = big(inv.delta_f);
  r.doc["validation"] = validation_json(v);
  r.exit_code = v.passed() ? 0 : 2;
  return r;
}

Result cmd_shape(const WeilPolynomial& w, std::uint32_t ell) {
  Result r;
  r.doc["polynomial"] = poly_json(w);
  r.doc["ell"] = ell;
  r.doc["shape"] = to_string(gsp4::frobenius_shape(w, ell));
  return r;
}

Json factor_row(const LocalFactor& f) {
  Json row{{"place", f.ell}, {"shape", f.shape ? gsp4::to_string(*f.shape) : "-"}};
  row["value_num"] = big(f.value.get_num());
  row["value_den"] = big(f.value.get_den());
  row["path"] = to_string(f.path);
  row["cross_check"] = f.cross_check ? f.cross_check->get_str() : "-";
  row["agree"] = !f.disagreement();
  return row;
}

Result cmd_nu(const WeilPolynomial& w, const std::vector<std::uint64_t>& places, const Common& c) {
  Result r;
  const auto v = validate(w);
  if (!v.passed()) throw Error(ErrorKind::Validation, "polynomial fails validation");
  const CharacterGroup cg = identify_characters(w);
  Json rows = Json::array();
  const BigFloat inf = nu_infinity(w);
  const BigFloat inf_k = nu_infinity_field(cg);
  rows.push_back(Json{{"place", "inf"}, {"shape", "-"}, {"value_num", decimal(inf, c.digits)}, {"value_den", 1},
                      {"path", to_string(FactorPath::Archimedean)}, {"cross_check", decimal(inf_k, c.digits)},
                      {"agree", abs(inf - inf_k) <= BigFloat("1e-40") * inf}});
  bool all_agree = rows.back()["agree"].get<bool>();
  for (const std::uint64_t ell : places) {
    if (static_cast<std::int64_t>(ell) == w.p) {
      const BigRational np = nu_p(w);
      rows.push_back(Json{{"place", ell}, {"shape", "-"}, {"value_num", big(np.get_num())},
                          {"value_den", big(np.get_den())}, {"path", to_string(FactorPath::Formula)},
                          {"cross_check", nu_ell_K(cg, ell).get_str()}, {"agree", np == nu_ell_K(cg, ell)}});
    } else {
      const LocalFactor f = nu_ell(w, ell, cg);
      rows.push_back(factor_row(f));
    }
    if (ell != 2) all_agree = all_agree && rows.back()["agree"].get<bool>();
  }
  r.doc["polynomial"] = poly_json(w);
  r.doc["rows"] = rows;
  r.table_key = "rows";
  r.exit_code = all_agree ? 0 : 5;
  return r;
}

Result cmd_product(const WeilPolynomial& w, const std::vector<std::uint64_t>& cutoffs, const Common& c) {
  Result r;
  if (!validate(w).passed()) throw Error(ErrorKind::Validation, "polynomial fails validation");
  const CharacterGroup cg = identify_characters(w);
  const ClassNumberData cn = relative_class_number(w, cg);
  const BigFloat target = to_bigfloat(cn.rhs_mass);
  Json rows = Json::array();
  for (const auto& pp : partial_products(w, cg, cutoffs)) {
    rows.push_back(Json{{"X", pp.cutoff},
                        {"P(X)", decimal(pp.value, c.digits)},
                        {"log_error_vs_rhs", static_cast<double>(abs(log(pp.value / target)))}});
  }
  r.doc["polynomial"] = poly_json(w);
  r.doc["rhs_mass"] = cn.rhs_mass.get_str();
  r.doc["ladder"] = rows;
  r.table_key = "ladder";
  return r;
}

Result cmd_verify(const WeilPolynomial& w, const std::vector<std::uint64_t>& cutoffs, const Common& c) {
  Result r;
  const MassReport rep = verify_mass(w, cutoffs);
  r.doc["f"] = poly_json(w);
  Json lhs = Json::array();
  Json table = Json::array();
  for (const auto& row : rep.convergence) {
    lhs.push_back(Json{{"X", row.cutoff}, {"P", decimal(row.value, c.digits)}});
    table.push_back(Json{{"X", row.cutoff}, {"P(X)", decimal(row.value, c.digits)}, {"log_error", row.log_error}});
  }
  r.doc["lhs_partial_products"] = lhs;
  if (rep.class_numbers) {
    r.doc["rhs_mass_num"] = big(rep.class_numbers->rhs_mass.get_num());
    r.doc["rhs_mass_den"] = big(rep.class_numbers->rhs_mass.get_den());
    r.doc["h_rel"] = big(rep.class_numbers->h_rel);
    r.doc["omega_K"] = rep.class_numbers->omega_k;
  } else {
    r.doc["rhs_mass_num"] = nullptr;
    r.doc["rhs_mass_den"] = nullptr;
    r.doc["h_rel"] = nullptr;
    r.doc["omega_K"] = rep.characters ? Json(omega_K(*rep.characters)) : Json(nullptr);
  }
  r.doc["verdict"] = rep.pass() ? "PASS" : "FAIL";
  r.doc["gates"] = Json{{"validation", rep.validation_ok},
                        {"matching", rep.matching_ok},
                        {"integrality", rep.integrality_ok},
                        {"convergence", rep.convergence_ok}};
  if (rep.characters) {
    r.doc["galois_type"] = to_string(rep.characters->galois_type);
    r.doc["delta_k"] = big(rep.characters->delta_k);
    r.doc["delta_kplus"] = big(rep.characters->delta_kplus);
  }
  r.doc["notes"] = rep.notes;
  r.doc["convergence_table"] = table;
  r.table_key = "convergence_table";
  if (!rep.pass()) r.exit_code = rep.failure ? exit_code_for(*rep.failure) : 1;
  return r;
}

BigRational per_fiber(std::uint64_t count, std::uint32_t ell) {
  const BigInt l(static_cast<unsigned long>(ell));
  return make_rational(BigInt(std::to_string(count)) * l * l, gsp4::sp4_order(ell));
}

Result cmd_oracle(const std::vector<WeilPolynomial>& polys, std::uint32_t ell, bool allow_big, bool signs,
                  const Common& c) {
  if (!allow_big && ell != 2 && ell != 3 && ell != 5)
    throw Error(ErrorKind::InvalidArgument, "oracle primes are limited to {2, 3, 5} without --allow-big-oracle");
  Result r;
  const auto en = gsp4::GroupEnumeration::load_or_build(ell, cache_dir(c), {allow_big});
  gsp4::FiberOracle oracle(en);
  Json rows = Json::array();
  bool fibers_ok = true;
  for (std::uint32_t m = 1; m < ell; ++m)
    fibers_ok = fibers_ok && oracle.fiber(m).nonzero_classes() == static_cast<std::size_t>(ell) * ell;
  bool ok = fibers_ok;
  for (const auto& w : polys) {
    Json row{{"a", w.a}, {"b", w.b}};
    if (static_cast<std::int64_t>(ell) == w.p) {
      // Semisimple elements with characteristic polynomial (T^2 - aT + b)^2 live in the fiber of b.
      const BigRational formula = nu_p(w);
      const auto count = oracle.count_semisimple_with_charpoly(w.a, w.b, static_cast<std::uint32_t>(mod_floor(w.b, ell)));
      const BigRational by_count = per_fiber(count, ell);
      row["kind"] = "nu_p";
      row["shape"] = "-";
      row["formula"] = formula.get_str();
      row["count"] = by_count.get_str();
      row["agree"] = formula == by_count;
    } else {
      const CharacterGroup cg = identify_characters(w);
      std::optional<gsp4::ShapeKind> shape;
      try {
        shape = gsp4::frobenius_shape(w, ell).kind;
      } catch (const Error& e) {
        if (ell != 2 || e.kind() != ErrorKind::Validation) throw;
      }
      const BigRational by_char = nu_ell_K(cg, ell);
      const auto cyc = oracle.count_cyclic_with_semisimplification(w, signs);
      const BigRational by_count = per_fiber(cyc.total, ell);
      // At ell = 2 the shape value is a cross-check only.
      bool agree = by_count == by_char;
      row["kind"] = "nu_ell";
      row["shape"] = shape ? gsp4::to_string(*shape) : "-";
      if (shape) {
        const BigRational by_shape = nu_from_shape(*shape, ell);
        row["formula"] = by_shape.get_str();
        if (ell != 2) agree = agree && by_shape == by_count;
      }
      row["character"] = by_char.get_str();
      row["count"] = by_count.get_str();
      if (cyc.plus) {
        row["plus"] = *cyc.plus;
        row["minus"] = *cyc.minus;
        agree = agree && *cyc.plus == *cyc.minus;
      }
      if (mod_floor(invariants(w).delta_f, ell) != 0) {
        const BigRational simple = per_fiber(oracle.count_charpoly_in_fiber(w), ell);
        row["charpoly"] = simple.get_str();
        agree = agree && simple == by_count;
      }
      row["agree"] = agree;
    }
    ok = ok && row["agree"].get<bool>();
    rows.push_back(row);
  }
  r.doc["ell"] = ell;
  r.doc["group_order"] = big(gsp4::gsp4_order(ell));
  r.doc["every_fiber_has_ell_squared_charpolys"] = fibers_ok;
  r.doc["isa"] = gsp4::kernels::to_string(gsp4::kernels::detect_isa());
  r.doc["rows"] = rows;
  r.doc["verdict"] = ok ? "PASS" : "FAIL";
  r.table_key = "rows";
  r.exit_code = ok ? 0 : 5;
  return r;
}

Result cmd_corpus(std::int64_t q, bool with_mass, const Common& c) {
  Result r;
  const auto corpus = enumerate_corpus(q);
  Json rows = Json::array();
  auto fn = [&](const CorpusEntry& e) {
    Json row = Json::parse(corpus_json_line(e));
    if (with_mass) {
      const CharacterGroup cg = identify_characters(e.poly);
      const ClassNumberData cn = relative_class_number(e.poly, cg);
      row["omega_K"] = cn.omega_k;
      row["h_rel"] = big(cn.h_rel);
      row["rhs_mass"] = cn.rhs_mass.get_str();
    }
    return row;
  };
  for (auto& row : parallel_map(corpus, c.jobs, fn)) rows.push_back(std::move(row));
  r.doc["q"] = q;
  r.doc["count"] = corpus.size();
  r.doc["entries"] = rows;
  r.table_key = "entries";
  return r;
}

Result cmd_satotate(double q, std::uint64_t samples, std::uint64_t seed, int grid) {
  Result r;
  const double total = angle_density_total();
  const auto mass = weil_density_cell_mass(q, grid, grid);
  const auto counts = monte_carlo_pushforward(q, grid, grid, samples, seed);
  const auto cmp = compare_grids(mass, counts, samples);
  double mass_total = 0;
  for (double v : mass.values) mass_total += v;
  r.doc["q"] = q;
  r.doc["angle_density_integral"] = total;
  r.doc["weil_density_integral"] = mass_total;
  r.doc["samples"] = samples;
  r.doc["seed"] = seed;
  r.doc["grid"] = grid;
  r.doc["max_abs_z"] = cmp.max_abs_z;
  r.doc["cells_over_3_sigma"] = cmp.cells_over;
  r.doc["stray_cells"] = cmp.stray_cells;
  const bool ok = std::abs(total - 1) < 1e-6 && cmp.cells_over == 0 && cmp.stray_cells == 0;
  r.doc["verdict"] = ok ? "PASS" : "FAIL";
  r.exit_code = ok ? 0 : 5;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masses of isogeny classes of ordinary abelian surfaces over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "json, csv or pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}))
      ->capture_default_str();
  app.add_option("--out", common.out, "write to a file instead of stdout");
  app.add_option("--cache", common.cache, "enumeration cache directory (default $WEIL_MASS_CACHE)");
  app.add_option("--digits", common.digits, "decimal digits for real values")->check(CLI::Range(1, 50));
  app.add_option("-j,--jobs", common.jobs, "worker count for corpus sweeps")->check(CLI::Range(1u, 256u));

  PolyArgs pa;
  std::uint32_t ell = 3;
  std::string cutoffs = "1e3,1e4,1e5";
  std::string places_bound = "100";
  std::int64_t corpus_q = 0;
  bool allow_big = false, signs = false, with_mass = false;
  double st_q = 1;
  std::string st_samples = "1e7";
  std::uint64_t st_seed = 20240611;
  int st_grid = 20;

  auto* validate_cmd = app.add_subcommand("validate", "check the hypotheses on f");
  add_poly(validate_cmd, pa);
  auto* shape_cmd = app.add_subcommand("shape", "shape of Frobenius at ell");
  add_poly(shape_cmd, pa);
  shape_cmd->add_option("-l,--ell", ell, "prime ell != p")->required();
  auto* nu_cmd = app.add_subcommand("nu", "local factors at every place below a bound");
  add_poly(nu_cmd, pa);
  nu_cmd->add_option("--bound", places_bound, "finite places ell < bound")->capture_default_str();
  auto* product_cmd = app.add_subcommand("product", "partial products over a cutoff ladder");
  add_poly(product_cmd, pa);
  product_cmd->add_option("--cutoffs", cutoffs, "strictly increasing list")->capture_default_str();
  auto* verify_cmd = app.add_subcommand("verify", "full pipeline with a PASS/FAIL verdict");
  add_poly(verify_cmd, pa);
  verify_cmd->add_option("--cutoffs", cutoffs, "strictly increasing list")->capture_default_str();
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force counts over GSp4(F_ell)");
  add_poly(oracle_cmd, pa, false);
  oracle_cmd->add_option("-l,--ell", ell, "prime in {2, 3, 5}")->required();
  oracle_cmd->add_option("--corpus-q", corpus_q, "run on every corpus member for this q");
  oracle_cmd->add_flag("--allow-big-oracle", allow_big, "permit ell >= 7 (several GB)");
  oracle_cmd->add_flag("--signs", signs, "split two-class shapes by sign");
  auto* corpus_cmd = app.add_subcommand("corpus", "enumerate the admissible Weil polynomials for q");
  corpus_cmd->add_option("--q", corpus_q, "prime power")->required();
  corpus_cmd->add_flag("--with-mass", with_mass, "add omega_K, h_rel and the mass");
  auto* st_cmd = app.add_subcommand("satotate", "Sato-Tate density checks");
  st_cmd->add_option("--q", st_q, "q")->capture_default_str();
  st_cmd->add_option("--samples", st_samples, "Monte-Carlo samples")->capture_default_str();
  st_cmd->add_option("--seed", st_seed, "RNG seed")->capture_default_str();
  st_cmd->add_option("--grid", st_grid, "cells per axis")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    Result r;
    if (*validate_cmd) {
      r = cmd_validate(make_poly(pa));
    } else if (*shape_cmd) {
      r = cmd_shape(make_poly(pa), ell);
    } else if (*nu_cmd) {
      const auto bound = parse_count(places_bound);
      std::vector<std::uint64_t> places;
      for (auto l : primes_below(static_cast<std::uint32_t>(bound))) places.push_back(l);
      r = cmd_nu(make_poly(pa), places, common);
    } else if (*product_cmd) {
      r = cmd_product(make_poly(pa), parse_cutoffs(cutoffs), common);
    } else if (*verify_cmd) {
      r = cmd_verify(make_poly(pa), parse_cutoffs(cutoffs), common);
    } else if (*oracle_cmd) {
      std::vector<WeilPolynomial> polys;
      if (corpus_q != 0) {
        for (const auto& e : enumerate_corpus(corpus_q)) polys.push_back(e.poly);
      } else {
        polys.push_back(make_poly(pa));
      }
      r = cmd_oracle(polys, ell, allow_big, signs, common);
    } else if (*corpus_cmd) {
      r = cmd_corpus(corpus_q, with_mass, common);
    } else if (*st_cmd) {
      r = cmd_satotate(st_q, parse_count(st_samples), st_seed, st_grid);
    }
    if (common.out.empty()) {
      render(r, common, std::cout);
    } else {
      std::ofstream os(common.out);
      if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + common.out);
      render(r, common, os);
    }
    return r.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
