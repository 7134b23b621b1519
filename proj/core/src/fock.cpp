#include "bergman/fock.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

inline std::size_t t3(long s) { return s < 0 ? 0 : std::size_t((s + 3) * (s + 2) * (s + 1) / 6); }
inline std::size_t t2(long s) { return s < 0 ? 0 : std::size_t((s + 2) * (s + 1) / 2); }

// Rank of (c0, c1, c2, c3) among compositions of s into 4 parts, lexicographic order.
inline std::size_t comp_rank(const int* c, int s) {
    const int s1 = s - c[0];
    const int s2 = s1 - c[1];
    return t3(s) - t3(s - c[0]) + t2(s1) - t2(s2) + std::size_t(c[2]);
}

}  // namespace

// FockBasis -------------------------------------------------------------------

std::size_t FockBasis::count(int charge, int P_max) {
    std::size_t total = 0;
    for (int p = std::max(0, -charge); p <= P_max; ++p) total += t3(p) * t3(p + charge);
    return total;
}

FockBasis::FockBasis(int charge, int P_max, std::size_t max_states)
    : charge_(charge), P_max_(P_max), p_min_(std::max(0, -charge)) {
    if (P_max < 0) throw ValidationError("P_max must be non-negative");
    const std::size_t total = count(charge, P_max);
    if (total > max_states) {
        std::ostringstream os;
        os << "sector with charge " << charge << " and P_max " << P_max << " has " << total
           << " states, above the cap of " << max_states;
        throw SectorOverflow(os.str());
    }
    occ_.reserve(total);
    offset_.assign(std::size_t(std::max(P_max + 1, 0)) + 1, 0);
    std::size_t off = 0;
    for (int p = 0; p <= P_max; ++p) {
        offset_[p] = off;
        if (p < p_min_) continue;
        const int q = p + charge;
        std::vector<std::array<int, 4>> ms, ns;
        auto comps = [](int s, std::vector<std::array<int, 4>>& out) {
            for (int c0 = 0; c0 <= s; ++c0)
                for (int c1 = 0; c1 <= s - c0; ++c1)
                    for (int c2 = 0; c2 <= s - c0 - c1; ++c2) out.push_back({c0, c1, c2, s - c0 - c1 - c2});
        };
        comps(p, ms);
        comps(q, ns);
        for (const auto& m : ms)
            for (const auto& n : ns) {
                Occupation o;
                for (int i = 0; i < 4; ++i) {
                    o[i] = std::uint8_t(m[i]);
                    o[4 + i] = std::uint8_t(n[i]);
                }
                occ_.push_back(o);
            }
        off += ms.size() * ns.size();
    }
    offset_[P_max + 1] = off;
}

FockBasisState FockBasis::state(std::size_t i) const {
    FockBasisState s;
    for (int k = 0; k < 4; ++k) {
        s.m[k] = occ_[i][k];
        s.n[k] = occ_[i][4 + k];
    }
    return s;
}

int FockBasis::pairs(std::size_t i) const { return occ_[i][0] + occ_[i][1] + occ_[i][2] + occ_[i][3]; }

long FockBasis::rank(const std::array<int, 8>& o) const {
    int p = 0, q = 0;
    for (int k = 0; k < 4; ++k) {
        if (o[k] < 0 || o[4 + k] < 0) return -1;
        p += o[k];
        q += o[4 + k];
    }
    if (q - p != charge_ || p > P_max_ || p < p_min_) return -1;
    return long(offset_[p] + comp_rank(o.data(), p) * t3(q) + comp_rank(o.data() + 4, q));
}

long FockBasis::rank(const FockBasisState& s) const {
    std::array<int, 8> o;
    for (int k = 0; k < 4; ++k) {
        o[k] = s.m[k];
        o[4 + k] = s.n[k];
    }
    return rank(o);
}

std::string FockBasis::csv() const {
    std::ostringstream os;
    os << "index,m11,m12,m21,m22,n11,n12,n21,n22\n";
    for (std::size_t i = 0; i < occ_.size(); ++i) {
        os << i;
        for (int k = 0; k < 8; ++k) os << ',' << int(occ_[i][k]);
        os << '\n';
    }
    return os.str();
}

BasisPtr shared_basis(int charge, int P_max, std::size_t max_states) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, BasisPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(charge, P_max);
    auto it = cache.find(key);
    if (it != cache.end()) {
        if (it->second->size() > max_states) throw SectorOverflow("cached sector exceeds the requested cap");
        return it->second;
    }
    auto b = std::make_shared<const FockBasis>(charge, P_max, max_states);
    cache.emplace(key, b);
    return b;
}

// FockVector ------------------------------------------------------------------

FockVector::FockVector(BasisPtr basis) : basis_(std::move(basis)), amps_(basis_->size(), cplx(0.0)) {}

cplx FockVector::amplitude(const FockBasisState& s) const {
    const long r = basis_->rank(s);
    return r < 0 ? cplx(0.0) : amps_[std::size_t(r)];
}

void FockVector::set(const FockBasisState& s, cplx value) {
    const long r = basis_->rank(s);
    if (r < 0) throw ValidationError("state is outside the truncated sector");
    amps_[std::size_t(r)] = value;
}

double FockVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

cplx FockVector::dot(const FockVector& o) const {
    if (basis_ != o.basis_) return dot(o.restricted_to(basis_));
    cplx s{0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * o.amps_[i];
    return s;
}

std::size_t FockVector::support() const {
    std::size_t n = 0;
    for (const auto& a : amps_)
        if (a != cplx(0.0)) ++n;
    return n;
}

FockVector FockVector::restricted_to(const BasisPtr& other) const {
    if (other == basis_) return *this;
    if (other->charge() != basis_->charge()) throw DimensionMismatch("bases have different charge");
    FockVector out(other);
    std::array<int, 8> o;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (amps_[i] == cplx(0.0)) continue;
        for (int k = 0; k < 8; ++k) o[k] = basis_->occupation(i)[k];
        const long r = other->rank(o);
        if (r >= 0) out.amps_[std::size_t(r)] = amps_[i];
    }
    return out;
}

FockVector& FockVector::operator+=(const FockVector& o) {
    if (o.basis_ != basis_) return *this += o.restricted_to(basis_);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
}

FockVector& FockVector::operator-=(const FockVector& o) {
    if (o.basis_ != basis_) return *this -= o.restricted_to(basis_);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
    return *this;
}

FockVector& FockVector::operator*=(cplx s) {
    for (auto& a : amps_) a *= s;
    return *this;
}

// FockOperator ----------------------------------------------------------------

int FockOperator::charge_shift() const {
    if (terms.empty()) return 0;
    int shift = 0;
    for (const auto& l : terms.front().ops) {
        const int sgn = l.create ? 1 : -1;
        shift += l.mode < 4 ? -sgn : sgn;
    }
    return shift;
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
    FockOperator r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.constant += o.constant;
    return r;
}

FockOperator FockOperator::operator*(cplx s) const {
    FockOperator r = *this;
    for (auto& t : r.terms) t.coeff *= s;
    r.constant *= s;
    return r;
}

FockVector FockOperator::apply(const FockVector& v, const BasisPtr& target) const {
    const FockBasis& src = *v.basis();
    if (target->charge() != src.charge() + charge_shift())
        throw DimensionMismatch("target sector does not match the operator's charge shift");
    FockVector out(target);
    auto& dst = out.data();
    const auto& in = v.data();
    std::array<int, 8> o;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const cplx amp = in[i];
        if (amp == cplx(0.0)) continue;
        const Occupation& base = src.occupation(i);
        for (const auto& t : terms) {
            if (t.coeff == cplx(0.0)) continue;
            for (int k = 0; k < 8; ++k) o[k] = base[k];
            double f = 1.0;
            bool alive = true;
            for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) {
                int& n = o[it->mode];
                if (it->create) {
                    ++n;
                    f *= std::sqrt(double(n));
                } else {
                    if (n == 0) {
                        alive = false;
                        break;
                    }
                    f *= std::sqrt(double(n));
                    --n;
                }
            }
            if (!alive) continue;
            const long r = target->rank(o);
            if (r < 0) continue;
            dst[std::size_t(r)] += t.coeff * f * amp;
        }
    }
    if (constant != cplx(0.0)) {
        if (target != v.basis()) {
            FockVector c = v.restricted_to(target);
            c *= constant;
            out += c;
        } else {
            for (std::size_t i = 0; i < in.size(); ++i) dst[i] += constant * in[i];
        }
    }
    return out;
}

FockVector FockOperator::apply(const FockVector& v) const {
    if (charge_shift() != 0) throw DimensionMismatch("operator changes the sector; pass a target basis");
    return apply(v, v.basis());
}

double FockOperator::norm_bound(const FockBasis& basis) const {
    const double occ = double(basis.P_max() + std::max(basis.P_max() + basis.charge(), 0) + 2);
    double b = std::abs(constant);
    for (const auto& t : terms) b += std::abs(t.coeff) * std::pow(occ, 0.5 * double(t.ops.size()));
    return b;
}

FockOperator ladder(int mode, bool create) {
    FockOperator op;
    op.terms.push_back({cplx(1.0), {{mode, create}}});
    return op;
}

namespace {

Ladder z_ladder(int a, int alpha) {
    if (a < 2) return {a_mode(alpha, a), true};
    return {b_mode(a - 2, alpha), false};
}

Ladder zdag_ladder(int a, int alpha) {
    if (a < 2) return {a_mode(alpha, a), false};
    return {b_mode(a - 2, alpha), true};
}

}  // namespace

FockOperator z_op(int a, int alpha) {
    FockOperator op;
    op.terms.push_back({cplx(1.0), {z_ladder(a, alpha)}});
    return op;
}

FockOperator zdag_op(int a, int alpha) {
    FockOperator op;
    op.terms.push_back({cplx(1.0), {zdag_ladder(a, alpha)}});
    return op;
}

FockOperator operator_from_matrix(const Mat4& X) {
    const Mat4 M = gamma_matrix() * X;
    FockOperator op;
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c) {
                if (std::abs(M(a, c)) == 0.0) continue;
                op.terms.push_back({-M(a, c), {zdag_ladder(a, alpha), z_ladder(c, alpha)}});
            }
    return op;
}

FockOperator casimir_op() {
    FockOperator op;
    for (int i = 0; i < 4; ++i) {
        op.terms.push_back({cplx(0.5), {{4 + i, true}, {4 + i, false}}});
        op.terms.push_back({cplx(-0.5), {{i, true}, {i, false}}});
    }
    return op;
}

Rep build_rep(const RepConfig& cfg) {
    if (cfg.N < 1) throw InvalidLevel("representation level N must be >= 1");
    Rep r;
    r.cfg = cfg;
    r.basis = shared_basis(2 * (cfg.N - 1), cfg.P_max, cfg.max_states);
    const auto& gb = generators();
    for (int i = 0; i < 15; ++i) r.generators[i] = operator_from_matrix(gb.matrices[i]);
    r.casimir = casimir_op();
    return r;
}

FockVector lowest_state(const BasisPtr& basis, int N) {
    if (N < 1) throw InvalidLevel("representation level N must be >= 1");
    if (basis->charge() != 2 * (N - 1)) throw DimensionMismatch("basis is not the level-N sector");
    FockVector v(basis);
    const double s = 1.0 / std::sqrt(double(N));
    for (int n = 0; n < N; ++n) {
        FockBasisState st;
        st.n = {N - 1 - n, n, n, N - 1 - n};
        v.set(st, (n % 2 ? -s : s));
    }
    return v;
}

FockVector lowest_state(const RepConfig& cfg) {
    return lowest_state(shared_basis(2 * (cfg.N - 1), cfg.P_max, cfg.max_states), cfg.N);
}

PairOps pair_ops(const Mat2& B) {
    PairOps p;
    for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
            for (int ga = 0; ga < 2; ++ga) {
                const cplx c = B(be, ga);
                if (c == cplx(0.0)) continue;
                p.lower.terms.push_back({c, {{a_mode(al, be), false}, {b_mode(ga, al), false}}});
                p.raise.terms.push_back({std::conj(c), {{a_mode(al, be), true}, {b_mode(ga, al), true}}});
            }
    return p;
}

ExpResult apply_exp(const FockOperator& op, const FockVector& v, double t, double tol) {
    ExpResult r;
    r.vec = v;
    if (t == 0.0 || (op.terms.empty() && op.constant == cplx(0.0))) return r;
    const double bound = std::abs(t) * op.norm_bound(*v.basis());
    r.steps = std::max(1, int(std::ceil(bound / 6.0)));
    const double h = t / r.steps;
    for (int s = 0; s < r.steps; ++s) {
        FockVector term = r.vec;
        FockVector sum = r.vec;
        int small = 0;
        for (int k = 1; k < 400; ++k) {
            term = op.apply(term);
            term *= cplx(h / double(k));
            sum += term;
            ++r.applications;
            const double tn = term.norm();
            if (tn <= tol * std::max(sum.norm(), 1e-300)) {
                if (++small >= 2) break;
            } else {
                small = 0;
            }
            if (k == 399) throw NumericalError("Taylor series for the exponential did not converge");
        }
        r.vec = std::move(sum);
    }
    return r;
}

namespace {

FockOperator boost_op(double l1, double l2) {
    Mat2 L = Mat2::Zero();
    L.diagonal() << l1, l2;
    return operator_from_matrix(from_blocks(Mat2::Zero(), L, L, Mat2::Zero()));
}

int max_pairs(const FockVector& v) {
    int p = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != cplx(0.0)) p = std::max(p, v.basis()->pairs(i));
    return p;
}

// exp of a pair-number-preserving operator, computed on the smallest basis that holds v.
FockVector apply_compact_exp(const FockOperator& op, const FockVector& v) {
    const auto& full = v.basis();
    const int p = max_pairs(v);
    BasisPtr small = shared_basis(full->charge(), p, full->size());
    auto r = apply_exp(op, v.restricted_to(small));
    return r.vec.restricted_to(full);
}

struct BoostRuns {
    FockVector fine;
    FockVector coarse;  // embedded into the fine basis
};

BoostRuns boost_runs(const RepConfig& cfg, double l1, double l2, const FockVector& v, double lambda_max) {
    if (std::abs(l1) > lambda_max || std::abs(l2) > lambda_max)
        throw ValidationError("boost parameters exceed lambda_max");
    const auto op = boost_op(l1, l2);
    BoostRuns out;
    out.fine = apply_exp(op, v).vec;
    const int pc = std::max(0, cfg.P_max - 2);
    BasisPtr cb = shared_basis(v.basis()->charge(), pc, cfg.max_states);
    auto coarse = apply_exp(op, v.restricted_to(cb)).vec;
    out.coarse = coarse.restricted_to(v.basis());
    return out;
}

}  // namespace

BoostResult apply_boost(const RepConfig& cfg, double l1, double l2, const FockVector& v, double lambda_max) {
    auto runs = boost_runs(cfg, l1, l2, v, lambda_max);
    BoostResult r;
    FockVector diff = runs.fine;
    diff -= runs.coarse;
    r.truncation_estimate = diff.norm();
    r.truncation_warning = r.truncation_estimate > 1e-4;
    r.vec = std::move(runs.fine);
    return r;
}

AlgebraElement compact_log(const GroupElement& k) {
    const Mat4& m = k.matrix();
    if (block_b(m).cwiseAbs().maxCoeff() > 1e-10 || block_c(m).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("compact_log expects a block-diagonal element");
    std::array<Mat2, 2> U;
    std::array<Eigen::Vector2d, 2> th;
    double total = 0.0;
    for (int blk = 0; blk < 2; ++blk) {
        const Mat2 u = blk == 0 ? block_a(m) : block_d(m);
        Eigen::ComplexSchur<Mat2> schur(u);
        U[blk] = schur.matrixU();
        for (int i = 0; i < 2; ++i) {
            th[blk](i) = std::arg(schur.matrixT()(i, i));
            total += th[blk](i);
        }
    }
    const double twopi = 2.0 * std::numbers::pi;
    th[0](0) -= twopi * std::round(total / twopi);
    Mat4 L = Mat4::Zero();
    for (int blk = 0; blk < 2; ++blk) {
        Mat2 D = Mat2::Zero();
        D.diagonal() << kI * th[blk](0), kI * th[blk](1);
        const Mat2 lb = U[blk] * D * U[blk].adjoint();
        if (blk == 0)
            L.topLeftCorner<2, 2>() = lb;
        else
            L.bottomRightCorner<2, 2>() = lb;
    }
    return expand(L, 1e-9);
}

Omega0Result matrix_element(const RepConfig& cfg, const GroupElement& g, const FockVector& u, const FockVector& v,
                            double lambda_max) {
    const auto kak = kak_decompose(g);
    const auto kinv = kak.k.inverse();
    const auto Kop = operator_from_matrix(compact_log(kinv).matrix());
    const auto Qop = operator_from_matrix(compact_log(kak.q).matrix());
    const FockVector ku = apply_compact_exp(Kop, u);
    const FockVector qv = apply_compact_exp(Qop, v);
    auto runs = boost_runs(cfg, kak.lambda1, kak.lambda2, qv, lambda_max);
    Omega0Result r;
    r.value = ku.dot(runs.fine);
    r.truncation_estimate = std::abs(r.value - ku.dot(runs.coarse));
    r.truncation_warning = r.truncation_estimate > 1e-4;
    r.lambda1 = kak.lambda1;
    r.lambda2 = kak.lambda2;
    return r;
}

Omega0Result omega0_fock(const RepConfig& cfg, const GroupElement& g, double lambda_max) {
    const auto x0 = lowest_state(cfg);
    return matrix_element(cfg, g, x0, x0, lambda_max);
}

double adjoint_action_check(const RepConfig& cfg, const GroupElement& g) {
    const Mat4 logg = g.matrix().log();
    const auto X = operator_from_matrix(expand(logg, 1e-8).matrix());
    const auto Xm = X * cplx(-1.0);
    const BasisPtr basis = shared_basis(2 * (cfg.N - 1), cfg.P_max, cfg.max_states);
    const BasisPtr lower = shared_basis(2 * (cfg.N - 1) - 1, cfg.P_max, cfg.max_states);

    FockVector v = lowest_state(basis, cfg.N);
    Mat2 B;
    B << 0.3, cplx(0.1, -0.2), cplx(0.0, 0.25), -0.15;
    v += pair_ops(B).raise.apply(v);

    const FockVector Tv = apply_exp(X, v).vec;
    const int interior = cfg.P_max / 2;
    double worst = 0.0;
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int a = 0; a < 4; ++a) {
            const FockVector lhs = apply_exp(Xm, z_op(a, alpha).apply(Tv, lower)).vec;
            FockVector rhs(lower);
            for (int c = 0; c < 4; ++c) {
                FockVector t = z_op(c, alpha).apply(v, lower);
                t *= g.matrix()(a, c);
                rhs += t;
            }
            for (std::size_t i = 0; i < lower->size(); ++i) {
                if (lower->pairs(i) > interior) continue;
                worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
            }
        }
    return worst;
}

cplx expectation(const FockOperator& A, const FockOperator& B, const FockVector& v) {
    return v.dot(A.apply(B.apply(v)));
}

cplx expectation(const FockOperator& A, const FockVector& v) { return v.dot(A.apply(v)); }

}  // namespace bergman
