#include "radoforge/characters.hpp"

#include <algorithm>
#include <cmath>

namespace radoforge {

Character::Character(FieldCtxPtr ctx, std::uint64_t d) : ctx_(std::move(ctx)), d_(d) {
    if (!ctx_) throw DomainError("Character: null context");
    if (d_ < 2) throw DomainError("Character: order d must be >= 2");
    const Int qm1 = ctx_->size().q - 1;
    if (qm1 % d_ != 0) throw DomainError("Character: d does not divide q-1");
    cofactor_ = qm1 / d_;
    const FieldElem g = ctx_->primitive_root();
    const FieldElem zeta = pow(g, cofactor_);
    zeta_powers_.reserve(d_);
    FieldElem acc = ctx_->one();
    for (std::uint64_t k = 0; k < d_; ++k) {
        zeta_powers_.push_back(acc);
        if (k + 1 < d_) acc = acc * zeta;
    }
}

CharValue Character::eval(const FieldElem& x) const {
    if (x.ctx().get() != ctx_.get()) throw DomainError("Character: element from another context");
    if (x.is_zero()) return CharValue::Zero();
    const FieldElem y = pow(x, cofactor_);
    for (std::uint64_t k = 0; k < d_; ++k) {
        if (y == zeta_powers_[k]) return CharValue::Root(static_cast<std::uint32_t>(k));
    }
    throw DomainError("Character: x^((q-1)/d) is not a power of the reference root (internal)");
}

bool Character::in_kernel(const FieldElem& x) const {
    if (x.is_zero()) return false;
    return pow(x, cofactor_).is_one();
}

const std::vector<std::uint32_t>& Character::exponent_table() const {
    std::call_once(table_once_, [this] {
        const std::uint64_t q = ctx_->size().q64;
        if (q == 0 || q > ctx_->caps().max_enum) return; // reported below
        table_.assign(q, static_cast<std::uint32_t>(d_));
        // chi(g^i) = zeta^(i mod d), so one multiplicative walk fills the table
        const FieldElem g = ctx_->primitive_root();
        FieldElem y = ctx_->one();
        for (std::uint64_t i = 0; i < q - 1; ++i) {
            table_[y.index64()] = static_cast<std::uint32_t>(i % d_);
            y = y * g;
        }
        table_[0] = static_cast<std::uint32_t>(d_); // index 0 is the zero element
    });
    if (table_.empty()) {
        throw DomainError("Character: field order exceeds the enumeration cap");
    }
    return table_;
}

bool chi_mul_check(const Character& chi, const FieldElem& x, const FieldElem& y) {
    const CharValue vx = chi.eval(x);
    const CharValue vy = chi.eval(y);
    const CharValue vxy = chi.eval(x * y);
    if (vx.zero || vy.zero) return vxy.zero;
    if (vxy.zero) return false;
    return vxy.k == (vx.k + vy.k) % chi.d();
}

std::complex<double> CyclotomicSum::value() const {
    std::complex<double> acc(0.0, 0.0);
    const double step = 2.0 * 3.14159265358979323846 / static_cast<double>(d);
    for (std::uint64_t k = 0; k < d; ++k) {
        const double angle = step * static_cast<double>(k);
        acc += static_cast<double>(counts[k]) * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc;
}

double CyclotomicSum::abs() const { return std::abs(value()); }

CyclotomicSum char_sum(const Character& chi, const std::vector<FieldElem>& roots) {
    if (roots.empty()) throw DomainError("char_sum: empty root set");
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].ctx().get() != chi.ctx().get()) {
            throw DomainError("char_sum: root from another context");
        }
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (roots[i] == roots[j]) throw DomainError("char_sum: duplicate roots");
        }
    }
    const std::uint64_t q = chi.ctx()->size().q64;
    if (q == 0 || q > chi.ctx()->caps().max_enum) {
        throw DomainError("char_sum: field order exceeds the enumeration cap");
    }
    const std::uint64_t d = chi.d();
    CyclotomicSum out;
    out.d = d;
    out.counts.assign(d, 0);
    const auto& table = chi.exponent_table();
    const auto& ctx = chi.ctx();
    for (std::uint64_t i = 0; i < q; ++i) {
        const FieldElem x = ctx->element_at(Int(i));
        std::uint64_t exp_total = 0;
        bool zero = false;
        for (const FieldElem& c : roots) {
            const std::uint32_t t = table[(x - c).index64()];
            if (t == d) {
                zero = true;
                break;
            }
            exp_total += t;
        }
        if (zero) {
            ++out.zero_hits;
        } else {
            ++out.counts[exp_total % d];
        }
    }
    return out;
}

BoundReport weil_check(const CyclotomicSum& sum, std::uint32_t k, const Int& q) {
    BoundReport r;
    r.sum_abs = sum.abs();
    r.bound = (k >= 1 ? static_cast<double>(k - 1) : 0.0) *
              std::sqrt(static_cast<double>(q));
    r.slack = r.bound - r.sum_abs;
    r.holds = r.sum_abs <= r.bound + kBoundTolerance;
    return r;
}

WeilSweep weil_sweep(std::uint64_t q_max, std::uint32_t k_max,
                     const std::vector<std::uint64_t>& d_set, unsigned threads,
                     const SizeCaps& caps) {
    WeilSweep sweep;
    if (k_max < 2 || d_set.empty()) return sweep;
    for (auto [q, e] : prime_powers_upto(q_max)) {
        const std::uint64_t p = factorize_u64(q)[0].first;
        const bool wanted = std::any_of(d_set.begin(), d_set.end(), [&](std::uint64_t d) {
            return d >= 2 && (q - 1) % d == 0;
        });
        if (!wanted) continue;

        FieldCtxPtr ctx = field_create(p, e, caps);
        std::vector<FieldElem> elems;
        elems.reserve(q);
        for (std::uint64_t i = 0; i < q; ++i) elems.push_back(ctx->element_at(Int(i)));
        // diff[x * q + c] = element index of elems[x] - elems[c]
        std::vector<std::uint32_t> diff(q * q);
        for (std::uint64_t x = 0; x < q; ++x) {
            for (std::uint64_t c = 0; c < q; ++c) {
                diff[x * q + c] = static_cast<std::uint32_t>((elems[x] - elems[c]).index64());
            }
        }

        for (std::uint64_t d : d_set) {
            if (d < 2 || (q - 1) % d != 0) continue;
            Character chi(ctx, d);
            const auto& table = chi.exponent_table();
            const std::uint32_t dz = static_cast<std::uint32_t>(d); // Zero marker

            for (std::uint32_t k = 2; k <= k_max && k <= q; ++k) {
                WeilRow row;
                row.q = q;
                row.p = p;
                row.e = e;
                row.d = d;
                row.k = k;
                row.bound = static_cast<double>(k - 1) * std::sqrt(static_cast<double>(q));
                double max_abs = 0.0;

                // roots = {0, 1} plus a (k-2)-combination out of [2, q)
                std::vector<std::uint64_t> roots(k);
                roots[0] = 0;
                roots[1] = 1;
                std::vector<std::int64_t> counts(d);
                auto check_set = [&] {
                    std::fill(counts.begin(), counts.end(), 0);
                    std::int64_t zero_hits = 0;
                    for (std::uint64_t x = 0; x < q; ++x) {
                        std::uint64_t exp_total = 0;
                        bool zero = false;
                        const std::uint32_t* drow = diff.data() + x * q;
                        for (std::uint32_t fi = 0; fi < k; ++fi) {
                            const std::uint32_t t = table[drow[roots[fi]]];
                            if (t == dz) {
                                zero = true;
                                break;
                            }
                            exp_total += t;
                        }
                        if (zero) {
                            ++zero_hits;
                        } else {
                            ++counts[exp_total % d];
                        }
                    }
                    CyclotomicSum sum;
                    sum.d = d;
                    sum.counts = counts;
                    sum.zero_hits = zero_hits;
                    const double a = sum.abs();
                    ++row.sets;
                    if (a > max_abs) max_abs = a;
                    if (a > row.bound + kBoundTolerance) ++row.violations;
                };

                if (k == 2) {
                    check_set();
                } else {
                    const std::uint32_t m = k - 2;
                    for (std::uint32_t i = 0; i < m; ++i) roots[2 + i] = 2 + i;
                    while (true) {
                        check_set();
                        std::int64_t pos = m - 1;
                        while (pos >= 0 && roots[2 + pos] == q - (m - static_cast<std::uint64_t>(pos))) {
                            --pos;
                        }
                        if (pos < 0) break;
                        ++roots[2 + pos];
                        for (std::uint32_t i = pos + 1; i < m; ++i) {
                            roots[2 + i] = roots[2 + i - 1] + 1;
                        }
                    }
                }

                row.max_sum_abs = max_abs;
                row.min_slack = row.bound - max_abs;
                sweep.sets_checked += row.sets;
                sweep.violations += row.violations;
                sweep.rows.push_back(row);
            }
        }
    }
    (void)threads; // sweep is deterministic and fast enough sequentially
    return sweep;
}

} // namespace radoforge
