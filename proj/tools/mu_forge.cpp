// mu-forge: command-line front door for the modular-symbol / p-adic L-function
// toolkit. One job per invocation; structured output is deterministic
// byte-for-byte for a fixed command line and corpus.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "muforge/congruence.hpp"
#include "muforge/corpus.hpp"
#include "muforge/curves.hpp"
#include "muforge/dirichlet.hpp"
#include "muforge/lfun.hpp"
#include "muforge/symbol.hpp"

using json = nlohmann::ordered_json;
using namespace muforge;

namespace {

json padic_json(const padic_int& x) {
  return json{{"value", x.residue().get_str()},
              {"p", x.p()},
              {"prec", x.precision()}};
}

json series_json(const padic_series& s) {
  json coeffs = json::array();
  for (int j = 0; j < s.length(); ++j) coeffs.push_back(padic_json(s.coeff(j)));
  return coeffs;
}

json rational_json(const mpq_class& r) { return r.get_str(); }

json optional_int_json(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string curve_spec_of(const curve_data& e) {
  std::ostringstream os;
  os << e.a1 << ',' << e.a2 << ',' << e.a3 << ',' << e.a4 << ',' << e.a6 << ':'
     << e.conductor.get_str();
  return os.str();
}

json curve_json(const curve_data& e) {
  json j{{"spec", curve_spec_of(e)}};
  if (!e.label.empty()) j["label"] = e.label;
  return j;
}

// --chi accepts "trivial", "quad:<fundamental d>", or "<m>:e1,e2,..." with
// exponents on the generators of (Z/m)^* in the order unit_group_generators
// reports them.
dirichlet_character parse_chi(const std::string& text) {
  if (text.empty() || text == "trivial") return trivial_character();
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw bad_input("character spec '" + text + "': expected trivial, quad:<d> or <m>:<exps>");
  std::string head = text.substr(0, colon);
  std::string tail = text.substr(colon + 1);
  if (head == "quad") return quadratic_character(std::stol(tail));
  long m = std::stol(head);
  std::vector<long> evec;
  std::stringstream ss(tail);
  std::string item;
  while (std::getline(ss, item, ',')) evec.push_back(std::stol(item));
  return character_from_exponents(m, evec);
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

mpq_class parse_rational(const std::string& text) {
  mpq_class r(text);
  r.canonicalize();
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Cache layout: one serialized symbol per (curve, sign) under the cache root.
// A cache file is a pure memo; a hit reproduces exactly what a rebuild would.
eigen_symbol obtain_symbol(const curve_data& e, int sign, const std::string& cache_dir) {
  if (cache_dir.empty()) return build_symbol(e, sign);
  std::filesystem::path dir(cache_dir);
  std::filesystem::create_directories(dir);
  std::ostringstream name;
  name << "sym_" << e.a1 << '_' << e.a2 << '_' << e.a3 << '_' << e.a4 << '_' << e.a6
       << '_' << e.conductor.get_str() << (sign > 0 ? "_plus" : "_minus") << ".txt";
  std::filesystem::path file = dir / name.str();
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    eigen_symbol s = deserialize_symbol(buf.str());
    if (s.curve == e && s.sign == sign) return s;
    // Stale or foreign entry: fall through and overwrite.
  }
  eigen_symbol s = build_symbol(e, sign);
  std::ofstream out(file);
  out << serialize_symbol(s);
  return s;
}

void emit(const json& payload, bool human) {
  if (!human) {
    std::cout << payload.dump(2) << '\n';
    return;
  }
  // Human mode: flat key: value lines, arrays inline. The structured mode is
  // the stable interface; this one is for eyeballing.
  for (const auto& [key, value] : payload.items())
    std::cout << key << ": " << value.dump() << '\n';
}

struct common_opts {
  std::string cache_dir;
  std::string corpus_path = "data/curves.txt";
  int threads = 1;
  bool human = false;
};

int run(int argc, char** argv) {
  CLI::App app{"modular symbols, p-adic L-functions and congruence checks"};
  app.require_subcommand(1);

  common_opts common;
  const char* env_cache = std::getenv("MUFORGE_CACHE");
  if (env_cache) common.cache_dir = env_cache;
  app.add_option("--cache-dir", common.cache_dir,
                 "directory memoizing built symbols (env MUFORGE_CACHE)");
  app.add_option("--corpus", common.corpus_path, "curve corpus file");
  app.add_option("--threads", common.threads, "parallelism width")
      ->check(CLI::PositiveNumber);
  app.add_flag("--human", common.human, "line-oriented output instead of JSON");

  std::string curve_spec, chi_spec = "trivial";
  std::vector<std::string> pair_specs;
  std::string primes_list = "2,3,5,7,13", at_list = "0", sigma_list;
  long p = 0, level = 0, conductor_bound = 100;
  int sign = +1, prec = 3, tdeg = 5, max_level = 0, rho = 0, scale = -1;

  CLI::App* ap_cmd = app.add_subcommand("ap", "trace-of-Frobenius table");
  ap_cmd->add_option("--curve", curve_spec)->required();
  ap_cmd->add_option("--primes", primes_list, "comma-separated primes");

  CLI::App* space_cmd = app.add_subcommand("space", "modular-symbol dimensions");
  space_cmd->add_option("--level", level)->required()->check(CLI::PositiveNumber);

  CLI::App* symbol_cmd = app.add_subcommand("symbol", "normalized symbol values");
  symbol_cmd->add_option("--curve", curve_spec)->required();
  symbol_cmd->add_option("--sign", sign)->check(CLI::IsMember({-1, 1}));
  symbol_cmd->add_option("--at", at_list, "comma-separated rationals num/den");

  auto add_lp_options = [&](CLI::App* cmd) {
    cmd->add_option("--curve", curve_spec)->required();
    cmd->add_option("--p", p)->required();
    cmd->add_option("--chi", chi_spec, "trivial | quad:<d> | <m>:e1,e2,...");
    cmd->add_option("--prec", prec)->check(CLI::PositiveNumber);
    cmd->add_option("--tdeg", tdeg)->check(CLI::PositiveNumber);
    cmd->add_option("--scale", scale, "power of p premultiplying the symbol (-1: auto)");
  };

  CLI::App* lp_cmd = app.add_subcommand("lp", "p-adic L-series with mu and lambda");
  add_lp_options(lp_cmd);
  lp_cmd->add_option("--max-level", max_level, "stabilization level cap (0: default)");

  CLI::App* sigma_cmd = app.add_subcommand("sigma-lp", "Sigma-incomplete p-adic L-series");
  add_lp_options(sigma_cmd);
  sigma_cmd->add_option("--sigma", sigma_list, "comma-separated primes to remove")
      ->required();

  CLI::App* interp_cmd = app.add_subcommand("interp", "interpolation property check");
  add_lp_options(interp_cmd);
  interp_cmd->add_option("--rho", rho, "exponent k: wild twist of conductor p^(k+1)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* scan_cmd = app.add_subcommand("scan", "congruent-pair scan over the corpus");
  scan_cmd->add_option("--p", p)->required();
  scan_cmd->add_option("--conductor-bound", conductor_bound);

  CLI::App* verify_cmd = app.add_subcommand("verify", "full congruence report for a pair");
  verify_cmd->add_option("--pair", pair_specs, "the two curve specs")
      ->required()
      ->expected(2);
  verify_cmd->add_option("--p", p)->required();
  verify_cmd->add_option("--chi", chi_spec);
  verify_cmd->add_option("--prec", prec)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tdeg", tdeg)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  // lp-like subcommands share the scale-retry loop: the series is linear in the
  // symbol, so premultiplying by p^s only shifts every valuation by s, and the
  // smallest workable s is deterministic.
  auto run_lp = [&](const eigen_symbol& sym, const dirichlet_character& chi) {
    theta_options opt;
    opt.threads = common.threads;
    int lo = scale >= 0 ? scale : 0;
    int hi = scale >= 0 ? scale : 4;
    for (int s = lo;; ++s) {
      try {
        opt.scale_pow = s;
        return lp_series(sym, chi, p, prec, tdeg, max_level, opt);
      } catch (const non_integral_value&) {
        if (s >= hi) throw;
      }
    }
  };

  if (*ap_cmd) {
    curve_data e = curve_from_spec(curve_spec);
    json table;
    for (long ell : parse_longs(primes_list)) {
      if (!is_prime(ell)) throw bad_input("ap: " + std::to_string(ell) + " is not prime");
      table[std::to_string(ell)] = a_ell_any(e, ell);
    }
    emit(json{{"command", "ap"}, {"curve", curve_json(e)}, {"ap", table}}, common.human);
    return 0;
  }

  if (*space_cmd) {
    auto mb = build_space(level);
    emit(json{{"command", "space"},
              {"level", level},
              {"dim", mb->dim},
              {"cuspidal_dim", mb->cuspidal_dim},
              {"cusps", mb->n_cusps}},
         common.human);
    return 0;
  }

  if (*symbol_cmd) {
    curve_data e = curve_from_spec(curve_spec);
    eigen_symbol s = obtain_symbol(e, sign, common.cache_dir);
    json values;
    std::vector<std::string> points;
    std::stringstream ss(at_list);
    std::string item;
    while (std::getline(ss, item, ',')) points.push_back(item);
    for (const std::string& pt : points)
      values[pt] = rational_json(s.eval(parse_rational(pt)));
    emit(json{{"command", "symbol"},
              {"curve", curve_json(e)},
              {"sign", s.sign},
              {"scale", rational_json(s.scale)},
              {"values", values}},
         common.human);
    return 0;
  }

  if (*lp_cmd || *sigma_cmd) {
    curve_data e = curve_from_spec(curve_spec);
    dirichlet_character chi = parse_chi(chi_spec);
    eigen_symbol sym = obtain_symbol(e, chi.is_even() ? +1 : -1, common.cache_dir);
    lp_result r = run_lp(sym, chi);
    padic_series out = r.series;
    std::vector<long> sigma;
    if (*sigma_cmd) {
      sigma = parse_longs(sigma_list);
      for (long ell : sigma)
        if (ell == p) throw bad_input("sigma must not contain p");
      out = sigma_incomplete(out, sigma, e, chi);
    }
    mu_lambda_result ml = mu_lambda(out);
    json payload{{"command", *sigma_cmd ? "sigma-lp" : "lp"},
                 {"curve", curve_json(e)},
                 {"p", p},
                 {"chi", chi_spec}};
    if (*sigma_cmd) payload["sigma"] = sigma;
    payload["series"] = series_json(out);
    payload["stabilized_at"] = r.stabilized_at;
    payload["scale_pow"] = r.scale_pow;
    payload["mu"] = optional_int_json(ml.mu);
    payload["lambda"] = optional_int_json(ml.lambda);
    emit(payload, common.human);
    return 0;
  }

  if (*interp_cmd) {
    curve_data e = curve_from_spec(curve_spec);
    dirichlet_character chi = parse_chi(chi_spec);
    eigen_symbol sym = obtain_symbol(e, chi.is_even() ? +1 : -1, common.cache_dir);
    theta_options opt;
    opt.threads = common.threads;
    opt.scale_pow = scale >= 0 ? scale : 0;
    std::optional<interp_report> rep;
    for (int s = opt.scale_pow;; ++s) {
      try {
        opt.scale_pow = s;
        rep = interpolation_check(sym, chi, rho, p, prec, opt);
        break;
      } catch (const non_integral_value&) {
        if (scale >= 0 || s >= 4) throw;
      }
    }
    emit(json{{"command", "interp"},
              {"curve", curve_json(e)},
              {"p", rep->p},
              {"chi", chi_spec},
              {"rho_exp", rep->rho_exp},
              {"working_prec", rep->working_prec},
              {"scale_pow", rep->scale_pow},
              {"diff_valuation",
               json{{"num", rep->diff_val_num}, {"den", rep->diff_val_den}}},
              {"pass", rep->pass}},
         common.human);
    return 0;
  }

  if (*scan_cmd) {
    std::vector<curve_data> corpus = load_corpus(common.corpus_path);
    auto pairs = scan_pairs(corpus, conductor_bound, p, common.threads);
    json list = json::array();
    for (const auto& [a, b] : pairs)
      list.push_back(json{{"first", curve_json(a)}, {"second", curve_json(b)}});
    emit(json{{"command", "scan"},
              {"p", p},
              {"conductor_bound", conductor_bound},
              {"pairs", list},
              {"count", list.size()}},
         common.human);
    return 0;
  }

  if (*verify_cmd) {
    curve_data e1 = curve_from_spec(pair_specs[0]);
    curve_data e2 = curve_from_spec(pair_specs[1]);
    dirichlet_character chi = parse_chi(chi_spec);
    verify_options opt;
    opt.prec = prec;
    opt.tdeg = tdeg;
    opt.threads = common.threads;
    congruence_report rep = verify_theorems(e1, e2, p, chi, opt);

    json units = json::array();
    for (const matched_unit& mu : rep.units) {
      json u{{"exponent", mu.exponent}};
      u["u"] = mu.u ? padic_json(*mu.u) : json(nullptr);
      units.push_back(u);
    }
    json evidence = json::array();
    for (const evidence_table& ev : rep.evidence)
      evidence.push_back(json{{"exponent", ev.exponent},
                              {"prime_bound", ev.prime_bound},
                              {"primes_checked", ev.rows.size()},
                              {"pass", ev.pass}});
    json payload{{"command", "verify"},
                 {"first", curve_json(e1)},
                 {"second", curve_json(e2)},
                 {"p", rep.p},
                 {"chi", chi_spec},
                 {"witness1", rep.witness1 ? json(*rep.witness1) : json(nullptr)},
                 {"witness2", rep.witness2 ? json(*rep.witness2) : json(nullptr)},
                 {"mu1", optional_int_json(rep.mu1)},
                 {"mu2", optional_int_json(rep.mu2)},
                 {"lambda1", optional_int_json(rep.lambda1)},
                 {"lambda2", optional_int_json(rep.lambda2)},
                 {"sigma", rep.sigma},
                 {"evidence", evidence},
                 {"units", units},
                 {"congruence", verdict_name(rep.congruence)},
                 {"congruence_exponent", rep.congruence_exponent},
                 {"mu_le", verdict_name(rep.mu_le)},
                 {"mu_eq", verdict_name(rep.mu_eq)},
                 {"note", rep.note}};
    emit(payload, common.human);
    bool unmet = rep.congruence == verdict::not_applicable &&
                 rep.mu_le == verdict::not_applicable &&
                 rep.mu_eq == verdict::not_applicable;
    return unmet ? 2 : 0;
  }

  return 0;
}

}  // namespace

namespace {

bool hypotheses_unmet(const muforge::error& e) {
  return dynamic_cast<const ordinarity_violation*>(&e) ||
         dynamic_cast<const parity_mismatch*>(&e) ||
         dynamic_cast<const embedding_unsupported*>(&e) ||
         dynamic_cast<const non_integral_value*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const muforge::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hypotheses_unmet(e) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
