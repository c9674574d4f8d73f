// Development tool: enumerate small integral Weierstrass models, determine the
// conductor of each minimal one by eigenline probing, then keep one curve per
// isogeny class whose normalized symbol value reproduces L(E,1)/Omega+ (the
// strong-Weil normalization the rest of the test suite relies on). Output goes
// to stdout in the corpus file format: a1 a2 a3 a4 a6 conductor label.
//
// This is how data/curves.txt was produced; it is not part of the test suite.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "muforge/curves.hpp"
#include "muforge/lfun.hpp"
#include "muforge/symbol.hpp"

using namespace muforge;

namespace {

const std::vector<long> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                        29, 31, 37, 41, 43, 47, 53, 59, 61,
                                        67, 71, 73, 79, 83, 89, 97};

struct candidate {
  curve_data e;
  mpz_class c4, c6;
};

// Prime factorization by the primes that could divide a conductor <= 100.
// Returns false when a larger prime divides n (such a model cannot have small
// conductor, since the minimal discriminant's support equals the bad primes).
bool factor_small(mpz_class n, std::map<long, int>& out) {
  out.clear();
  n = abs(n);
  for (long q : kSmallPrimes)
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(q));
      ++out[q];
    }
  return n == 1;
}

bool divisible_pow(const mpz_class& n, long q, int e) {
  mpz_class m;
  mpz_pow_ui(m.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(e));
  return mpz_divisible_p(n.get_mpz_t(), m.get_mpz_t());
}

int main_impl() {
  std::map<long, std::shared_ptr<const manin_basis>> spaces;
  auto space_of = [&](long n) {
    auto it = spaces.find(n);
    if (it == spaces.end()) it = spaces.emplace(n, build_space(n)).first;
    return it->second;
  };

  std::set<std::pair<std::pair<std::string, std::string>, long>> seen_c4c6;
  std::vector<candidate> found;

  for (long a1 = 0; a1 <= 1; ++a1)
    for (long a2 = -1; a2 <= 1; ++a2)
      for (long a3 = 0; a3 <= 1; ++a3)
        for (long a4 = -30; a4 <= 30; ++a4)
          for (long a6 = -70; a6 <= 70; ++a6) {
            curve_data e;
            e.a1 = a1; e.a2 = a2; e.a3 = a3; e.a4 = a4; e.a6 = a6;
            mpz_class disc = e.discriminant();
            if (disc == 0) continue;

            std::map<long, int> fac;
            if (!factor_small(disc, fac)) continue;

            // Models reducible by u = q are never minimal; skip them so every
            // kept model is globally minimal (the converse test below).
            mpz_class c4 = e.c4(), c6 = e.c6();
            bool reducible = false;
            for (long q : kSmallPrimes)
              if (divisible_pow(c4, q, 4) && divisible_pow(c6, q, 6) &&
                  divisible_pow(disc, q, 12)) {
                reducible = true;
                break;
              }
            if (reducible) continue;

            // Conductor exponents: forced to 1 (multiplicative) or 2 (additive)
            // away from 2 and 3; scanned over the allowed window at 2 and 3.
            mpz_class base = 1;
            bool too_big = false;
            for (const auto& [q, v] : fac) {
              if (q == 2 || q == 3) continue;
              int f = mpz_divisible_ui_p(c4.get_mpz_t(), static_cast<unsigned long>(q)) ? 2 : 1;
              for (int i = 0; i < f; ++i) base *= q;
              if (base > 100) { too_big = true; break; }
            }
            if (too_big) continue;

            int v2 = fac.count(2) ? std::min(fac[2], 8) : 0;
            int v3 = fac.count(3) ? std::min(fac[3], 5) : 0;
            std::vector<long> cands;
            for (int f2 = (v2 ? 1 : 0); f2 <= v2; ++f2)
              for (int f3 = (v3 ? 1 : 0); f3 <= v3; ++f3) {
                mpz_class n = base;
                for (int i = 0; i < f2; ++i) n *= 2;
                for (int i = 0; i < f3; ++i) n *= 3;
                if (n <= 100 && n >= 11) cands.push_back(n.get_si());
              }
            std::sort(cands.begin(), cands.end());

            for (long n : cands) {
              e.conductor = n;
              try {
                validate_curve(e);
                (void)eigen_functional(space_of(n), e, +1);
              } catch (const muforge::error&) {
                continue;
              }
              auto key = std::make_pair(std::make_pair(c4.get_str(), c6.get_str()), n);
              if (seen_c4c6.insert(key).second) found.push_back({e, c4, c6});
              break;  // degeneracy copies at multiples would only throw not_unique
            }
          }

  std::cerr << "models with verified conductor: " << found.size() << "\n";

  // One representative per isogeny class (conductor + trace fingerprint),
  // preferring the member that reproduces L(E,1)/Omega+ = lambda(0); classes
  // with vanishing L keep the largest real period.
  std::map<std::pair<long, std::string>, std::vector<candidate>> classes;
  for (const candidate& c : found) {
    std::string fp;
    for (long ell : {2L, 3L, 5L, 7L, 13L, 17L, 19L, 23L}) {
      if (c.e.conductor % ell == 0)
        fp += "b" + std::to_string(a_ell_bad(c.e, ell)) + ",";
      else
        fp += std::to_string(a_ell(c.e, ell)) + ",";
    }
    classes[{c.e.conductor.get_si(), fp}].push_back(c);
  }

  std::vector<curve_data> corpus;
  for (auto& [key, members] : classes) {
    std::sort(members.begin(), members.end(), [](const candidate& a, const candidate& b) {
      return std::make_pair(a.c4, a.c6) < std::make_pair(b.c4, b.c6);
    });
    const candidate* chosen = nullptr;
    double best_period = -1;
    for (const candidate& c : members) {
      double L = complex_L_value(c.e);
      double om = neron_periods(c.e).real_period;
      if (std::abs(L) >= 1e-6) {
        eigen_symbol s = build_symbol(c.e, +1);
        double lam0 = mpq_class(s.eval(0)).get_d();
        if (std::abs(lam0 - L / om) < 1e-6) {
          chosen = &c;
          break;
        }
      } else if (om > best_period) {
        best_period = om;
        chosen = &c;
      }
    }
    if (chosen) corpus.push_back(chosen->e);
  }

  std::sort(corpus.begin(), corpus.end(), [](const curve_data& a, const curve_data& b) {
    if (a.conductor != b.conductor) return a.conductor < b.conductor;
    return std::make_pair(a.c4(), a.c6()) < std::make_pair(b.c4(), b.c6());
  });

  std::map<long, int> per_level;
  std::cout << "# one curve per line: a1 a2 a3 a4 a6 conductor label\n";
  for (const curve_data& e : corpus) {
    int idx = ++per_level[e.conductor.get_si()];
    std::cout << e.a1 << ' ' << e.a2 << ' ' << e.a3 << ' ' << e.a4 << ' ' << e.a6
              << ' ' << e.conductor.get_str() << " n" << e.conductor.get_str()
              << '.' << idx << '\n';
  }
  std::cerr << "corpus size: " << corpus.size() << "\n";
  return 0;
}

}  // namespace

int main() {
  try {
    return main_impl();
  } catch (const std::exception& e) {
    std::cerr << "corpus_gen failed: " << e.what() << "\n";
    return 1;
  }
}
