#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fseries/inversion.hpp"

namespace fseries {

enum class OrbitStatus { cycle, escaped, stuck, maxed_out };

inline std::string orbit_status_str(OrbitStatus s) {
    switch (s) {
        case OrbitStatus::cycle: return "cycle";
        case OrbitStatus::escaped: return "escaped";
        case OrbitStatus::stuck: return "stuck";
        default: return "maxed-out";
    }
}

template <class Value>
struct OrbitRecord {
    Value start;
    std::vector<Value> steps;
    OrbitStatus status = OrbitStatus::maxed_out;
    std::vector<Value> cycle;  // members in orbit order, when status == cycle
};

// Branched affine map on Z: branch j applies H_j(x) = (num_a * x + num_b) / den
// exactly when x = j mod p.
class HydraMapZ {
  public:
    struct Branch {
        Rational slope, offset;  // H_j as a map on Q
    };

    HydraMapZ(long p, std::vector<Branch> branches) : p_(p), branches_(std::move(branches)) {
        if (static_cast<long>(branches_.size()) != p_)
            throw arithmetic_error("hydra needs one branch per residue");
        // branch-integrality spot check on a window of residues
        for (long x = -2 * p_ * p_; x <= 2 * p_ * p_; ++x) {
            long j = ((x % p_) + p_) % p_;
            Rational img = branches_[static_cast<std::size_t>(j)].slope * Rational(x) +
                           branches_[static_cast<std::size_t>(j)].offset;
            if (!img.is_integer())
                throw arithmetic_error("branch fails integrality on its residue class");
        }
    }

    // T_q: n/2 on evens, (qn+1)/2 on odds.
    static HydraMapZ shortened_qx_plus_one(const BigInt& q) {
        return HydraMapZ(2, {Branch{Rational(1, 2), Rational(0)},
                             Branch{Rational(BigInt(q), BigInt(2)), Rational(1, 2)}});
    }

    long modulus() const { return p_; }
    const std::vector<Branch>& branches() const { return branches_; }

    BigInt apply(const BigInt& x) const {
        BigInt j = ((x % p_) + p_) % p_;
        const Branch& br = branches_[static_cast<std::size_t>(j.get_si())];
        Rational img = br.slope * Rational(x) + br.offset;
        if (!img.is_integer()) throw arithmetic_error("branch output left the ring");
        return img.num();
    }

    OrbitRecord<BigInt> iterate(const BigInt& start, long max_steps,
                                const BigInt& magnitude_bound) const {
        OrbitRecord<BigInt> rec;
        rec.start = start;
        std::map<BigInt, std::size_t> seen;
        BigInt x = start;
        for (long i = 0; i < max_steps; ++i) {
            auto it = seen.find(x);
            if (it != seen.end()) {
                rec.status = OrbitStatus::cycle;
                rec.cycle.assign(rec.steps.begin() + static_cast<long>(it->second), rec.steps.end());
                return rec;
            }
            seen.emplace(x, rec.steps.size());
            rec.steps.push_back(x);
            BigInt mag = abs(x);
            if (mag > magnitude_bound) {
                rec.status = OrbitStatus::escaped;
                return rec;
            }
            x = apply(x);
        }
        rec.status = OrbitStatus::maxed_out;
        return rec;
    }

    // The F-series whose values encode this map's dynamics: a_j, b_j read off H_j.
    FSeriesSpec numen() const {
        std::vector<ExactScalar> a, b;
        for (const auto& br : branches_) {
            a.emplace_back(br.slope);
            b.emplace_back(br.offset);
        }
        return FSeriesSpec(p_, std::move(a), std::move(b));
    }

  private:
    long p_;
    std::vector<Branch> branches_;
};

// Element a + b*sqrt(D) of a real quadratic ring.
struct QuadElement {
    BigInt a, b;
    friend bool operator==(const QuadElement& x, const QuadElement& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator<(const QuadElement& x, const QuadElement& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    }
    std::string str(const BigInt& d) const {
        return a.get_str() + (b >= 0 ? "+" : "") + b.get_str() + "*sqrt(" + d.get_str() + ")";
    }
};

// Two-branch hydra on Z[sqrt(D)]: even branch x/2, odd branch (x*sqrt(D)+1)/2,
// with user-supplied congruence applicability. The built-in D = 7 instance uses
// even: a=0, b=0 (mod 2); odd: a=0, b=1 (mod 2); anything else is stuck.
class QuadHydra {
  public:
    using Applicable = std::function<int(const QuadElement&)>;  // branch index or -1

    QuadHydra(BigInt d, Applicable which) : d_(std::move(d)), which_(std::move(which)) {}

    static QuadHydra sqrt7() {
        return QuadHydra(BigInt(7), [](const QuadElement& x) -> int {
            bool a_even = mpz_even_p(x.a.get_mpz_t());
            bool b_even = mpz_even_p(x.b.get_mpz_t());
            if (a_even && b_even) return 0;
            if (a_even && !b_even) return 1;
            return -1;
        });
    }

    const BigInt& d() const { return d_; }

    std::optional<QuadElement> apply(const QuadElement& x) const {
        int branch = which_(x);
        if (branch < 0) return std::nullopt;
        if (branch == 0) return QuadElement{x.a / 2, x.b / 2};
        // (x*sqrt(D) + 1)/2 = ((D b + 1) + a sqrt(D)) / 2
        return QuadElement{(d_ * x.b + 1) / 2, x.a / 2};
    }

    OrbitRecord<QuadElement> iterate(const QuadElement& start, long max_steps,
                                     const BigInt& magnitude_bound) const {
        OrbitRecord<QuadElement> rec;
        rec.start = start;
        std::map<QuadElement, std::size_t> seen;
        QuadElement x = start;
        for (long i = 0; i < max_steps; ++i) {
            auto it = seen.find(x);
            if (it != seen.end()) {
                rec.status = OrbitStatus::cycle;
                rec.cycle.assign(rec.steps.begin() + static_cast<long>(it->second), rec.steps.end());
                return rec;
            }
            seen.emplace(x, rec.steps.size());
            rec.steps.push_back(x);
            BigInt mag = abs(x.a);
            BigInt magb = abs(x.b);
            if (mag > magnitude_bound || magb > magnitude_bound) {
                rec.status = OrbitStatus::escaped;
                return rec;
            }
            auto next = apply(x);
            if (!next) {
                rec.status = OrbitStatus::stuck;
                return rec;
            }
            x = *next;
        }
        rec.status = OrbitStatus::maxed_out;
        return rec;
    }

  private:
    BigInt d_;
    Applicable which_;
};

// Correspondence check at a periodic point: the numen value, the branch relations
// H_{d_i}(x_{i+1}) = x_i along the digit cycle, and (for integral values) the
// actual orbit of the map.
struct CorrespondenceReport {
    ExactScalar value;
    bool integral = false;
    bool branch_relations_hold = false;
    bool orbit_cycle_matches = false;  // meaningful only when integral
    std::vector<std::string> cycle_members;
};

inline CorrespondenceReport correspondence_check(const HydraMapZ& map, const PAdicInt& z,
                                                 std::optional<ExactScalar> expected = std::nullopt) {
    FSeriesSpec numen = map.numen();
    CorrespondenceReport rep;
    rep.value = numen.eval_at_periodic(z);
    if (expected && !(rep.value == *expected))
        throw arithmetic_error("numen value differs from the expected cycle member");
    PAdicInt tail = z.shifted(static_cast<long>(z.preperiod().size()));
    long s = static_cast<long>(tail.period().size());
    std::vector<ExactScalar> values;
    for (long i = 0; i < s; ++i) values.push_back(numen.eval_at_periodic(tail.shifted(i)));
    rep.branch_relations_hold = true;
    for (long i = 0; i < s; ++i) {
        std::size_t digit = static_cast<std::size_t>(tail.digit(static_cast<std::size_t>(i)));
        ExactScalar expect = numen.a()[digit] * values[static_cast<std::size_t>((i + 1) % s)] +
                             numen.b()[digit];
        if (!(expect == values[static_cast<std::size_t>(i)])) rep.branch_relations_hold = false;
    }
    for (const auto& v : values) rep.cycle_members.push_back(v.str());
    ExactScalar head = numen.eval_at_periodic(tail);
    rep.integral = !head.is_symbolic() && head.demoted().tier() == 0 &&
                   head.demoted().rational().is_integer();
    if (rep.integral) {
        BigInt x0 = head.demoted().rational().num();
        auto rec = map.iterate(x0, 4 * s + 16, BigInt(1) << 200);
        if (rec.status == OrbitStatus::cycle) {
            std::set<BigInt> found(rec.cycle.begin(), rec.cycle.end());
            std::set<BigInt> expect_set;
            for (const auto& v : values) expect_set.insert(v.demoted().rational().num());
            rep.orbit_cycle_matches = found == expect_set;
        }
    }
    return rep;
}

// q-parameter diagnostics of the shortened qx+1 numen transform.
struct PoleReport {
    std::string breakdown_condition;   // alpha(0) = 1 relation
    std::string denominator_at_zero;   // q-denominator of X_hat(0)
    std::string denominator_generic;   // q-denominator at |t| = 2
    std::string classification;        // for a numeric q
};

inline PoleReport pole_report(std::optional<ExactScalar> q_value = std::nullopt) {
    PoleReport out;
    ExactScalar q = ExactScalar::variable("q");
    FSeriesSpec chi_q(2, {ExactScalar(Rational(1, 2)), q * ExactScalar(Rational(1, 2))},
                      {ExactScalar(Rational(0)), ExactScalar(Rational(1, 2))});
    auto rule = closed_transform(chi_q);
    SymbolicScalar breakdown = (rule->alpha0() - ExactScalar(Rational(1))).as_symbolic();
    out.breakdown_condition = breakdown.num().str() + " = 0";
    out.denominator_at_zero = rule->at(DualElement::zero(2)).as_symbolic().den().str();
    out.denominator_generic = rule->at(DualElement(2, 1, 1)).as_symbolic().den().str();
    if (q_value) {
        Evaluation sub{{"q", *q_value}};
        ExactScalar alpha0 = apply_evaluation(rule->alpha0(), sub);
        if (alpha0 == ExactScalar(Rational(1))) {
            out.classification = "breakdown";
        } else if (*q_value == ExactScalar(Rational(1))) {
            out.classification = "pole-at-1";
        } else if (*q_value == ExactScalar(Rational(3))) {
            out.classification = "pole-at-3";
        } else {
            out.classification = "regular";
        }
    }
    return out;
}

}  // namespace fseries
