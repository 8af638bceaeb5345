#include "kleinian/identities.hpp"

#include <cmath>

namespace kleinian {

Real identity_residual(const Identity& id, const Vec& lambdas, const WpJet& jet) {
  Complex sum(0, 0);
  Real largest = 0;
  for (const IdentityTerm& t : id.terms) {
    Complex val(t.coeff, 0);
    for (int k = 0; k < 6 && k < lambdas.size(); ++k) {
      for (int e = 0; e < t.lam_pow[static_cast<std::size_t>(k)]; ++e) val *= lambdas(k);
    }
    for (const MultiIndex& f : t.wp_factors) {
      switch (f.size()) {
        case 2: val *= jet.wp(f[0], f[1]); break;
        case 3: val *= jet.wp(f[0], f[1], f[2]); break;
        case 4: val *= jet.wp(f[0], f[1], f[2], f[3]); break;
        default: throw error("wp factor order must be 2..4");
      }
    }
    sum += val;
    largest = std::max(largest, std::abs(val));
  }
  return std::abs(sum) / std::max(largest, 1.0);
}

namespace {

IdentityTerm term(Real coeff, std::initializer_list<int> lam,
                  std::initializer_list<MultiIndex> wps) {
  IdentityTerm t;
  t.coeff = coeff;
  for (int k : lam) t.lam_pow[static_cast<std::size_t>(k)] += 1;
  for (const MultiIndex& w : wps) {
    MultiIndex s = w;
    std::sort(s.begin(), s.end());
    t.wp_factors.push_back(s);
  }
  return t;
}

std::vector<Identity> build_registry() {
  std::vector<Identity> reg;
  const MultiIndex w11{0, 0}, w12{0, 1}, w22{1, 1};
  const MultiIndex w111{0, 0, 0}, w112{0, 0, 1}, w122{0, 1, 1}, w222{1, 1, 1};
  const MultiIndex w1111{0, 0, 0, 0}, w1112{0, 0, 0, 1}, w1122{0, 0, 1, 1},
      w1222{0, 1, 1, 1}, w2222{1, 1, 1, 1};

  // ---- H relations: fourth derivatives of log sigma -------------------
  // H-1: wp2222 = 6 wp22^2 + 4 l4 wp22 + 4 l5 wp12 + 2 l3 l5
  reg.push_back({"H-1 (corrected)", "2-15", true,
                 {term(1, {}, {w2222}), term(-6, {}, {w22, w22}), term(-4, {4}, {w22}),
                  term(-4, {5}, {w12}), term(-2, {3, 5}, {})}});
  // printed adds -12 l6 wp11 with l6 undefined (enters as zero)
  reg.push_back({"H-1 (as-tabulated, lambda6 as 0)", "2-15", false,
                 {term(1, {}, {w2222}), term(-6, {}, {w22, w22}), term(-4, {4}, {w22}),
                  term(-4, {5}, {w12}), term(-2, {3, 5}, {})}});

  // H-2: wp2221 = 6 wp22 wp21 + 4 l4 wp21 - 2 l5 wp11   (printed form is exact)
  reg.push_back({"H-2 (corrected)", "2-15", true,
                 {term(1, {}, {w1222}), term(-6, {}, {w22, w12}), term(-4, {4}, {w12}),
                  term(2, {5}, {w11})}});
  reg.push_back({"H-2 (as-tabulated)", "2-15", false,
                 {term(1, {}, {w1222}), term(-6, {}, {w22, w12}), term(-4, {4}, {w12}),
                  term(2, {5}, {w11})}});

  // H-3: wp2211 = 4 wp21^2 + 2 wp22 wp11 + 2 l3 wp21
  reg.push_back({"H-3 (corrected)", "2-15", true,
                 {term(1, {}, {w1122}), term(-4, {}, {w12, w12}), term(-2, {}, {w22, w11}),
                  term(-2, {3}, {w12})}});
  // printed: ... = 4 l2 wp31 + 2 l3 wp21 with wp31 undefined (as zero)
  reg.push_back({"H-3 (as-tabulated, wp31 as 0)", "2-15", false,
                 {term(1, {}, {w1122}), term(-4, {}, {w12, w12}), term(-2, {}, {w22, w11}),
                  term(-2, {3}, {w12})}});

  // H-4: wp2111 = 6 wp21 wp11 - 2 l1 wp22 + 4 l2 wp21 - 4 l0 l5
  reg.push_back({"H-4 (corrected)", "2-15", true,
                 {term(1, {}, {w1112}), term(-6, {}, {w12, w11}), term(2, {1}, {w22}),
                  term(-4, {2}, {w12}), term(4, {0, 5}, {})}});
  // printed constant is -2 l0 l5
  reg.push_back({"H-4 (as-tabulated)", "2-15", false,
                 {term(1, {}, {w1112}), term(-6, {}, {w12, w11}), term(2, {1}, {w22}),
                  term(-4, {2}, {w12}), term(2, {0, 5}, {})}});

  // H-5: wp1111 = 6 wp11^2 - 12 l0 wp22 + 4 l1 wp21 + 4 l2 wp11 - 8 l0 l4 + 2 l1 l3
  reg.push_back({"H-5 (corrected)", "2-15", true,
                 {term(1, {}, {w1111}), term(-6, {}, {w11, w11}), term(12, {0}, {w22}),
                  term(-4, {1}, {w12}), term(-4, {2}, {w11}), term(8, {0, 4}, {}),
                  term(-2, {1, 3}, {})}});
  // printed constant is -4 l0 l4
  reg.push_back({"H-5 (as-tabulated)", "2-15", false,
                 {term(1, {}, {w1111}), term(-6, {}, {w11, w11}), term(12, {0}, {w22}),
                  term(-4, {1}, {w12}), term(-4, {2}, {w11}), term(4, {0, 4}, {}),
                  term(-2, {1, 3}, {})}});

  // ---- I relations: cubic relations among third derivatives -----------
  // I-0: wp112 = wp222 wp12 - wp122 wp22
  reg.push_back({"I-0 (corrected)", "2-16", true,
                 {term(1, {}, {w112}), term(-1, {}, {w222, w12}), term(1, {}, {w122, w22})}});
  // printed: wp112 = wp222 wp12 + wp122 wp22
  reg.push_back({"I-0 (as-tabulated)", "2-16", false,
                 {term(1, {}, {w112}), term(-1, {}, {w222, w12}), term(-1, {}, {w122, w22})}});

  // I-1: wp222^2 = 4(wp22^3 + wp12 wp22 + wp11 + l4 wp22^2 + l3 wp22 + l2)   (printed is exact)
  const std::vector<IdentityTerm> i1 = {
      term(1, {}, {w222, w222}), term(-4, {}, {w22, w22, w22}), term(-4, {}, {w12, w22}),
      term(-4, {}, {w11}),       term(-4, {4}, {w22, w22}),     term(-4, {3}, {w22}),
      term(-4, {2}, {})};
  reg.push_back({"I-1 (corrected)", "2-16", true, i1});
  reg.push_back({"I-1 (as-tabulated)", "2-16", false, i1});

  // I-2: wp222 wp221 = 4 wp12 wp22^2 - 2 wp11 wp22 + 2 wp12^2
  //                    + 4 l4 wp12 wp22 + 2 l3 wp12 + 2 l1          (printed is exact)
  const std::vector<IdentityTerm> i2 = {
      term(1, {}, {w222, w122}),  term(-4, {}, {w12, w22, w22}), term(2, {}, {w11, w22}),
      term(-2, {}, {w12, w12}),   term(-4, {4}, {w12, w22}),     term(-2, {3}, {w12}),
      term(-2, {1}, {})};
  reg.push_back({"I-2 (corrected)", "2-16", true, i2});
  reg.push_back({"I-2 (as-tabulated)", "2-16", false, i2});

  // I-3: wp221^2 = 4(wp12^2 wp22 - wp11 wp12 + l4 wp12^2 + l0 l5)
  reg.push_back({"I-3 (corrected)", "2-16", true,
                 {term(1, {}, {w122, w122}), term(-4, {}, {w12, w12, w22}),
                  term(4, {}, {w11, w12}), term(-4, {4}, {w12, w12}), term(-4, {0, 5}, {})}});
  // printed right-hand side transcribed term by term (dangling minus dropped,
  // trailing terms kept inside the big parenthesis); the cancellations bring
  // it to the corrected form
  reg.push_back({"I-3 (as-tabulated, best-effort reading)", "2-16", false,
                 {term(1, {}, {w122, w122}),
                  term(-4, {}, {w11, w22, w22}),  // + wp11 wp22^2
                  term(4, {}, {w11, w22, w22}),   // - wp11 wp22 * wp22
                  term(-4, {}, {w12, w12, w22}),  // + wp12^2 wp22
                  term(4, {3}, {w12, w22}),       // - l3 wp12 wp22
                  term(-4, {1}, {w22}),           // + l1 wp22
                  term(4, {}, {w11, w12}),        // - wp11 wp12
                  term(-4, {4}, {w11, w22}),      // + l4 wp11 wp22
                  term(-4, {3}, {w12, w22}),      // + l3 wp12 wp22
                  term(4, {4}, {w11, w22}),       // - l4 wp11 wp22
                  term(-4, {4}, {w12, w12}),      // + l4 wp12^2
                  term(4, {3, 4}, {w12}),         // - l4 l3 wp12
                  term(-4, {1, 4}, {}),           // + l4 l1
                  term(-4, {3, 4}, {w12}),        // + l4 l3 wp12
                  term(4, {1}, {w22}),            // - l1 wp22
                  term(4, {1, 4}, {}),            // - l1 l4
                  term(-4, {0}, {})}});           // + l0
  return reg;
}

}  // namespace

const std::vector<Identity>& wp_identity_registry() {
  static const std::vector<Identity> reg = build_registry();
  return reg;
}

std::vector<ResidualReport> identity_registry(const SigmaContext& ctx, const Vec& u,
                                              const std::string& inputs_digest) {
  const WpJet jet = wp_jet(ctx, u);
  std::vector<ResidualReport> out;
  for (const Identity& id : wp_identity_registry()) {
    const Real r = identity_residual(id, ctx.curve.lambdas, jet);
    if (id.gating) {
      out.push_back(make_gating("kleinian", id.name, id.equation, inputs_digest, r, 1e-6));
    } else {
      out.push_back(make_diagnostic("kleinian", id.name, id.equation, inputs_digest, r, 1e-6));
    }
  }
  return out;
}

}  // namespace kleinian
