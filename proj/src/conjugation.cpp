#include "cuspnorm/conjugation.hpp"

#include <algorithm>
#include <tuple>

#include "cuspnorm/arith.hpp"
#include "cuspnorm/cusps.hpp"
#include "cuspnorm/error.hpp"

namespace cuspnorm {

namespace {

Integer big(std::int64_t v) { return Integer(static_cast<long>(v)); }

}  // namespace

AtkinLehnerOp atkin_lehner_matrix(std::int64_t N, std::vector<std::int64_t> S) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be >= 1");
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  AtkinLehnerOp op;
  op.S = S;
  const auto primes = arith::prime_divisors(N);
  for (std::int64_t p : S) {
    if (std::find(primes.begin(), primes.end(), p) == primes.end()) {
      throw Error(ErrorKind::InvalidPrimeSet, std::to_string(p) + " is not a prime divisor of " + std::to_string(N));
    }
    op.N_S *= arith::ipow(p, arith::valuation(N, p));
  }
  if (S.empty()) {
    op.W = Mat2::identity();
    return op;
  }
  const std::int64_t rest = N / op.N_S;
  std::int64_t alpha = rest == 1 ? 1 : *arith::mod_inverse(op.N_S, rest);
  if (alpha == 0) alpha = rest;
  const Integer a = big(op.N_S) * big(alpha);
  const Integer beta = (a - 1) / big(rest);
  op.W = Mat2(a, beta, big(N), big(op.N_S));
  return op;
}

bool verify_atkin_lehner(const AtkinLehnerOp& op, std::int64_t N) {
  const Integer ns = big(op.N_S), n = big(N);
  const Mat2& W = op.W;
  if (W.det() != ns) return false;
  if (mod(W.a, ns) != 0 || mod(W.c, ns) != 0 || mod(W.d, ns) != 0) return false;
  if (mod(W.c, n) != 0) return false;
  Mat2 sq = W * W;
  for (const Integer* e : {&sq.a, &sq.b, &sq.c, &sq.d}) {
    if (mod(*e, ns) != 0) return false;
  }
  Mat2 g(Integer(sq.a / ns), Integer(sq.b / ns), Integer(sq.c / ns), Integer(sq.d / ns));
  return in_gamma0_NM(g, N, 1);
}

bool in_gamma0_NM(const Mat2& g, std::int64_t N, std::int64_t M) {
  const Integer m = big(M);
  return g.det() == 1 && mod(g.c, big(N)) == 0 && mod(Integer(g.a - 1), m) == 0 && mod(Integer(g.d - 1), m) == 0;
}

namespace {

// Minimises |cz+d|^2 / rhs(c) over the finite box where a failure is possible,
// valid whenever rhs(c) <= 3/4 for every c.
template <class Rhs>
GapVerdict lattice_search(const PointH& z, Rhs rhs_of, std::int64_t max_c) {
  const Rational three_quarters(3, 4);
  GapVerdict out;
  bool have = false;
  auto consider = [&](const Integer& c, const Integer& d) {
    ++out.pairs_checked;
    Rational lhs = cz_plus_d_norm2(Rational(c), Rational(d), z);
    Rational rhs = rhs_of(c);
    Rational ratio = lhs / rhs;
    if (!have || ratio < out.ratio) {
      have = true;
      out.worst_c = c;
      out.worst_d = d;
      out.lhs = lhs;
      out.rhs = rhs;
      out.ratio = ratio;
    }
  };
  consider(Integer(0), Integer(1));
  const Rational y2 = z.y * z.y;
  for (Integer c = 1; Rational(c * c) * y2 < three_quarters; ++c) {
    if (c > big(max_c)) throw Error(ErrorKind::BudgetExceeded, "lattice search exceeds the c budget");
    // (cx + d)^2 < 3/4 < 1 forces d within distance 1 of -cx.
    Rational centre = -Rational(c) * z.x;
    for (Integer d = ceil(Rational(centre - 1)); d <= floor(Rational(centre + 1)); ++d) consider(c, d);
  }
  out.pass = out.ratio >= 1;
  return out;
}

}  // namespace

GapVerdict verify_gap_certificate(const PointH& z, std::int64_t N, std::int64_t M, std::int64_t max_c) {
  if (N < 1 || M < 1 || N % (M * M) != 0) {
    throw Error(ErrorKind::InvalidM, "M^2 must divide N (N=" + std::to_string(N) + ", M=" + std::to_string(M) + ")");
  }
  const Integer quotient = big(N / (M * M));
  const Integer num = 3 * big(M) * big(M), den = 4 * big(N);
  return lattice_search(z, [&](const Integer& c) { return frac(num * gcd(c, quotient), den); }, max_c);
}

GapVerdict verify_corrected_gap(const PointH& z, std::int64_t N_S, std::int64_t M1, std::int64_t max_c) {
  if (N_S < 1 || M1 < 1 || N_S % (M1 * M1) != 0) {
    throw Error(ErrorKind::InvalidM, "M1^2 must divide N_S");
  }
  const Integer ns = big(N_S), m1sq = big(M1 * M1);
  // 1/n2 = gcd(c M1^2, N_S) / N_S
  return lattice_search(z, [&](const Integer& c) {
    Rational inv_n2 = frac(gcd(Integer(c * m1sq), ns), ns);
    return Rational(Rational(3, 4) * inv_n2 * inv_n2);
  }, max_c);
}

bool ReductionCertificate::all_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

ReductionCertificate width_one_conjugate(const Mat2& tau, std::int64_t N) {
  if (!is_sl2(tau)) throw Error(ErrorKind::NotUnimodular, "tau must have determinant 1");
  ReductionCertificate cert;
  cert.N = N;
  cert.tau = tau;
  std::vector<std::int64_t> S;
  for (const auto& d : local_profile(tau, N)) {
    if (d.w_p > 0) {
      S.push_back(d.p);
      cert.M1 *= arith::ipow(d.p, d.c_p);
      cert.M *= arith::ipow(d.p, d.c_p);
    } else {
      cert.M *= arith::ipow(d.p, d.n_p - d.c_p);
    }
  }
  cert.al = atkin_lehner_matrix(N, S);
  const Mat2 Wt = cert.al.W * tau;
  const Integer m1 = big(cert.M1), ns = big(cert.al.N_S);

  std::vector<arith::Congruence> system;
  bool solvable = true;
  for (std::int64_t p : S) {
    const Integer pn = big(arith::ipow(p, arith::valuation(N, p)));
    for (auto [lin, rhs] : {std::pair{Wt.a, Integer(-Wt.b * m1)}, std::pair{Wt.c, Integer(-Wt.d * m1)}}) {
      auto sol = arith::solve_linear_congruence(lin, rhs, pn);
      if (!sol) {
        solvable = false;
        break;
      }
      system.push_back(*sol);
    }
  }
  auto works = [&](const Integer& u) {
    return mod(Integer(Wt.a * u + Wt.b * m1), ns) == 0 && mod(Integer(Wt.c * u + Wt.d * m1), ns) == 0;
  };
  std::optional<Integer> u;
  if (solvable) {
    if (auto combined = arith::crt_solve(system); combined && works(combined->residue)) u = combined->residue;
  }
  if (!u) {
    cert.used_fallback = true;
    for (Integer cand = 0; cand < ns; ++cand) {
      if (works(cand)) {
        u = cand;
        break;
      }
    }
  }
  if (!u) throw Error(ErrorKind::InternalSolveFailure, "no translation parameter u in [0, N_S) solves the congruences");
  cert.u = *u;
  cert.n = Mat2Q(Rational(1), frac(*u, m1), Rational(0), Rational(1));
  const Mat2Q diag(frac(1, m1), Rational(0), Rational(0), frac(m1, ns));
  const Mat2Q sigma_q = to_rational(Wt) * cert.n * diag;

  auto& ck = cert.checks;
  const bool integral = is_integral(sigma_q);
  ck.push_back({"sigma_integral", integral});
  if (!integral) throw Error(ErrorKind::InternalSolveFailure, "constructed sigma is not integral");
  cert.sigma = to_integer(sigma_q);
  const std::int64_t M = cert.M;
  ck.push_back({"sigma_det_one", cert.sigma.det() == 1});
  ck.push_back({"sigma_denominator_is_N_over_M",
                cert.sigma.det() == 1 && cusp_denominator(cert.sigma, N) == N / M && N % M == 0});
  ck.push_back({"M_squared_divides_N", N % (M * M) == 0});
  ck.push_back({"M1_is_gcd_M_NS", cert.M1 == arith::gcd(M, cert.al.N_S)});
  ck.push_back({"M1_squared_divides_NS", cert.al.N_S % (cert.M1 * cert.M1) == 0});
  ck.push_back({"atkin_lehner_valid", verify_atkin_lehner(cert.al, N)});
  ck.push_back({"sigma_factorization", to_rational(cert.al.W) * to_rational(tau) * cert.n * diag == to_rational(cert.sigma)});
  return cert;
}

namespace {

Rational height_threshold_sq(std::int64_t N, std::int64_t M) {
  return frac(3 * big(M) * big(M) * big(M) * big(M), 4 * big(N) * big(N));
}

struct Candidate {
  AtkinLehnerOp al;
  Mat2 sigma;
  std::int64_t M = 1;
  PointH z_prime;
  GapVerdict gap;
};

// Scans z' = h W_S z over prime sets S, M with M^2 | N and bottom rows (c, d)
// of h with gcd(c, N) = N/M and Im z' >= sqrt3 M^2/(2N). Returns the first z'
// whose lattice check passes; sigma = h^-1.
std::optional<Candidate> search_alternatives(const PointH& z, std::int64_t N, std::int64_t max_candidates,
                                             std::int64_t& scanned) {
  const auto primes = arith::prime_divisors(N);
  for (unsigned mask = 0; mask < (1u << primes.size()); ++mask) {
    std::vector<std::int64_t> S;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask & (1u << i)) S.push_back(primes[i]);
    }
    AtkinLehnerOp al = atkin_lehner_matrix(N, S);
    const PointH w = mobius_act(al.W, z);
    for (std::int64_t M : arith::divisors(N)) {
      if (N % (M * M) != 0) continue;
      const std::int64_t C0 = N / M;
      // |cw + d|^4 <= Q  <=>  Im(h w)^2 >= 3 M^4 / (4 N^2)
      const Rational Q = w.y * w.y / height_threshold_sq(N, M);
      const Integer B = isqrt(ceil(Q)) + 1;  // B >= |cw + d|^2 on every candidate
      const Integer sB = isqrt(B) + 1;       // sB >= |cx + d|
      auto try_row = [&](const Integer& c, const Integer& d) -> std::optional<Candidate> {
        if (gcd(c, d) != 1) return std::nullopt;
        Rational n2 = cz_plus_d_norm2(Rational(c), Rational(d), w);
        if (n2 * n2 > Q) return std::nullopt;
        if (++scanned > max_candidates) {
          throw Error(ErrorKind::BudgetExceeded, "gap reduction search exceeds its candidate budget");
        }
        Integer g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), d.get_mpz_t(), c.get_mpz_t());
        Mat2 h(x, Integer(-y), c, d);  // x d + y c = 1
        Candidate cand{al, h.adjugate(), M, mobius_act(h, w), {}};
        cand.gap = verify_gap_certificate(cand.z_prime, N, M);
        if (cand.gap.pass) return cand;
        return std::nullopt;
      };
      if (M == 1) {
        if (auto r = try_row(Integer(0), Integer(1))) return r;
      }
      for (Integer c = C0; Rational(c * c) * w.y * w.y <= Rational(B); c += C0) {
        if (gcd(c, big(N)) != C0) continue;
        const Rational centre = -Rational(c) * w.x;
        for (Integer d = floor(centre) - sB; d <= ceil(centre) + sB; ++d) {
          if (auto r = try_row(c, d)) return r;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool GapReduction::all_ok() const {
  return construction.all_ok() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

GapReduction gap_reduce(const PointH& z, std::int64_t N, std::int64_t max_candidates) {
  GapReduction out;
  out.N = N;
  out.z = z;
  FdReduction fd = fd_reduce(z);
  out.tau = fd.tau;
  out.z0 = fd.z0;
  out.construction = width_one_conjugate(fd.tau, N);
  const auto& con = out.construction;
  out.construction_z_prime = mobius_act(con.sigma.adjugate() * con.al.W, z);
  out.construction_gap = verify_gap_certificate(out.construction_z_prime, N, con.M);

  auto& ck = out.checks;
  ck.push_back({"z0_in_fundamental_domain", in_fundamental_domain(fd.z0)});
  ck.push_back({"scale_identity",
                out.construction_z_prime.y == frac(big(con.M1 * con.M1), big(con.al.N_S)) * fd.z0.y});
  out.corrected_gap = verify_corrected_gap(out.construction_z_prime, con.al.N_S, con.M1);
  ck.push_back({"construction_corrected_lattice_bound", out.corrected_gap.pass});
  ck.push_back({"construction_height_bound",
                out.construction_z_prime.y * out.construction_z_prime.y >= height_threshold_sq(N, con.M)});

  if (out.construction_gap.pass) {
    out.method = "construction";
    out.al = con.al;
    out.sigma = con.sigma;
    out.M = con.M;
    out.z_prime = out.construction_z_prime;
    out.gap = out.construction_gap;
  } else if (auto alt = search_alternatives(z, N, max_candidates, out.candidates_scanned)) {
    out.method = "search";
    out.al = alt->al;
    out.sigma = alt->sigma;
    out.M = alt->M;
    out.z_prime = alt->z_prime;
    out.gap = alt->gap;
  } else {
    out.method = "none";
    out.al = con.al;
    out.sigma = con.sigma;
    out.M = con.M;
    out.z_prime = out.construction_z_prime;
    out.gap = out.construction_gap;
  }
  const std::int64_t M = out.M;
  ck.push_back({"sigma_in_sl2", is_sl2(out.sigma)});
  ck.push_back({"sigma_denominator_is_N_over_M", is_sl2(out.sigma) && cusp_denominator(out.sigma, N) * M == N});
  ck.push_back({"M_squared_divides_N", N % (M * M) == 0});
  ck.push_back({"atkin_lehner_valid", verify_atkin_lehner(out.al, N)});
  ck.push_back({"z_prime_is_sigma_inv_W_z", mobius_act(out.sigma.adjugate() * out.al.W, z) == out.z_prime});
  ck.push_back({"height_bound", out.z_prime.y * out.z_prime.y >= height_threshold_sq(N, M)});
  ck.push_back({"lattice_bound", out.gap.pass});
  return out;
}

}  // namespace cuspnorm
