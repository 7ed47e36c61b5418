#include "bar.h"

namespace ainf {

const MultiOp* BarFamily::comp(int n) const
{
    auto it = comps.find(n);
    if (it == comps.end() || it->second.is_zero())
        return nullptr;
    return &it->second;
}

/******** Transform ********/

/* Conjugation by suspensions, as an entrywise coefficient twist.  Towards
 * the bar side the exponent is n(n-1)/2 + sum_{i<n} (n-i)(d_i - 1) (the
 * constant comes from (s^{(x)n})^{-1} = (-1)^{n(n-1)/2} (s^{-1})^{(x)n});
 * back towards the m-side it is sum_{i<n} (n-i) d_i.  The two compose to
 * the identity. */
static Scalar twist(const AInfCategory& A, const Word& w, bool to_bar_side)
{
    long n = static_cast<long>(w.size());
    long e = to_bar_side ? n * (n - 1) / 2 : 0;
    for (long j = 0; j + 1 < n; ++j) {
        int d = A.basis[w[static_cast<std::size_t>(j)]].degree;
        e += (n - 1 - j) * (to_bar_side ? d - 1 : d);
    }
    return e % 2 == 0 ? Scalar::one(A.field) : -Scalar::one(A.field);
}

BarFamily to_bar(const AInfCategory& A, const std::map<int, MultiOp>& comps, int bar_degree,
                 int arity_bound)
{
    BarFamily b;
    b.bar_degree = bar_degree;
    b.arity_bound = arity_bound;
    for (const auto& [n, m] : comps) {
        if (m.is_zero())
            continue;
        if (m.arity != n || m.degree != bar_degree + 1 - n)
            throw input_error("to_bar: component of arity " + std::to_string(n) +
                              " has raw degree " + std::to_string(m.degree) + ", expected " +
                              std::to_string(bar_degree + 1 - n));
        MultiOp bn;
        bn.arity = n;
        bn.degree = bar_degree;
        for (const auto& [w, out] : m.entries) {
            Scalar t = twist(A, w, true);
            for (const auto& [y, c] : out)
                bn.add(w, y, c * t);
        }
        if (!bn.is_zero())
            b.comps.emplace(n, std::move(bn));
    }
    return b;
}

std::map<int, MultiOp> from_bar(const AInfCategory& A, const BarFamily& b)
{
    std::map<int, MultiOp> comps;
    for (const auto& [n, bn] : b.comps) {
        if (bn.is_zero())
            continue;
        if (bn.arity != n || bn.degree != b.bar_degree)
            throw input_error("from_bar: component of arity " + std::to_string(n) +
                              " is not on the bar side");
        MultiOp m;
        m.arity = n;
        m.degree = b.bar_degree + 1 - n;
        for (const auto& [w, out] : bn.entries) {
            Scalar t = twist(A, w, false);
            for (const auto& [y, c] : out)
                m.add(w, y, c * t);
        }
        if (!m.is_zero())
            comps.emplace(n, std::move(m));
    }
    return comps;
}

BarFamily bar_of_ops(const AInfCategory& A)
{
    return to_bar(A, A.ops, 1, A.arity_bound);
}

BarFamily bar_of_morphism(const AInfCategory& A, const AInfMorphism& f)
{
    return to_bar(A, f.comps, 0, f.arity_bound);
}

BarFamily bar_of_homotopy(const AInfCategory& A, const AInfHomotopy& h)
{
    return to_bar(A, h.comps, -1, h.arity_bound);
}

/******** Lifts ********/

WordSum coderivation_apply(const AInfCategory& A, const BarFamily& b, const Word& w)
{
    WordSum acc;
    int n = static_cast<int>(w.size());
    for (int r = 0; r < n; ++r)
        for (int s = 1; r + s <= n; ++s) {
            const MultiOp* bs = b.comp(s);
            if (!bs)
                continue;
            for (const auto& [w2, c] : block_apply(A, *bs, static_cast<std::size_t>(r), w, -1))
                word_add(acc, w2, c);
        }
    return acc;
}

WordSum coalgebra_morphism_apply(const AInfCategory& A, const BarFamily& F, const Word& w)
{
    WordSum acc;
    for (const auto& parts : compositions(w.size(), w.size())) {
        std::vector<const MultiOp*> fs;
        bool missing = false;
        for (std::size_t p : parts) {
            const MultiOp* fp = F.comp(static_cast<int>(p));
            if (!fp) {
                missing = true;
                break;
            }
            fs.push_back(fp);
        }
        if (missing)
            continue;
        for (const auto& [w2, c] : ops_apply(A, fs, parts, w, -1))
            word_add(acc, w2, c);
    }
    return acc;
}

WordSum fg_coderivation_apply(const AInfCategory& A, const BarFamily& F, const BarFamily& G,
                              const BarFamily& H, const Word& w)
{
    WordSum acc;
    for (const auto& parts : compositions(w.size(), w.size())) {
        for (std::size_t j = 0; j < parts.size(); ++j) {
            std::vector<const MultiOp*> fs;
            bool missing = false;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                const BarFamily& fam = i < j ? F : (i == j ? H : G);
                const MultiOp* fp = fam.comp(static_cast<int>(parts[i]));
                if (!fp) {
                    missing = true;
                    break;
                }
                fs.push_back(fp);
            }
            if (missing)
                continue;
            for (const auto& [w2, c] : ops_apply(A, fs, parts, w, -1))
                word_add(acc, w2, c);
        }
    }
    return acc;
}

/******** Checks ********/

LinComb b_square_defect(const AInfCategory& A, const BarFamily& b, int n, const Word& w)
{
    LinComb defect;
    for (int r = 0; r < n; ++r)
        for (int s = 1; r + s <= n; ++s) {
            int u = n - s + 1;
            const MultiOp* bs = b.comp(s);
            const MultiOp* bu = b.comp(u);
            if (!bs || !bu)
                continue;
            for (const auto& [w2, c] : block_apply(A, *bs, static_cast<std::size_t>(r), w, -1))
                lin_add(defect, bu->apply(w2), c);
        }
    return defect;
}

CheckReport b_square_check(const AInfCategory& A, const BarFamily& b)
{
    CheckReport rep;
    int top = 2 * b.arity_bound - 1;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            LinComb d = b_square_defect(A, b, n, w);
            if (!d.empty())
                rep.defects.push_back({n, w, d});
        }
    return rep;
}

CheckReport bar_morphism_check(const AInfCategory& A, const AInfCategory& B, const BarFamily& bA,
                               const BarFamily& bB, const BarFamily& F)
{
    CheckReport rep;
    int top = A.arity_bound + B.arity_bound;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            LinComb defect;
            for (int r = 0; r < n; ++r)
                for (int s = 1; r + s <= n; ++s) {
                    int u = n - s + 1;
                    const MultiOp* bs = bA.comp(s);
                    const MultiOp* fu = F.comp(u);
                    if (!bs || !fu)
                        continue;
                    for (const auto& [w2, c] :
                         block_apply(A, *bs, static_cast<std::size_t>(r), w, -1))
                        lin_add(defect, fu->apply(w2), c);
                }
            for (const auto& [v, c] : coalgebra_morphism_apply(A, F, w)) {
                const MultiOp* bk = bB.comp(static_cast<int>(v.size()));
                if (bk)
                    lin_add(defect, bk->apply(v), -c);
            }
            if (!defect.empty())
                rep.defects.push_back({n, w, defect});
        }
    return rep;
}

CheckReport bar_morphism_and_homotopy(const AInfCategory& A, const AInfCategory& B,
                                      const BarFamily& bA, const BarFamily& bB,
                                      const BarFamily& F, const BarFamily& G,
                                      const BarFamily& H)
{
    CheckReport rep;
    int top = std::max(A.arity_bound + B.arity_bound,
                       std::max(std::max(F.arity_bound, G.arity_bound), H.arity_bound));
    using PairSum = std::map<std::pair<Word, Word>, Scalar>;
    auto pair_add = [](PairSum& acc, const Word& x, const Word& y, const Scalar& c) {
        if (c.is_zero())
            return;
        auto [it, fresh] = acc.emplace(std::make_pair(x, y), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                acc.erase(it);
        }
    };
    auto sdeg = [&](const Word& x) {
        long d = 0;
        for (BasisId id : x)
            d += A.basis[id].degree - 1;
        return d;
    };

    for (int n = 1; n <= top; ++n)
        for (const Word& w : A.words(static_cast<std::size_t>(n))) {
            /* (i) Delta H = F (x) H + H (x) G, as sums of word pairs. */
            PairSum delta;
            WordSum hw = fg_coderivation_apply(A, F, G, H, w);
            for (const auto& [v, c] : hw)
                for (std::size_t k = 1; k < v.size(); ++k)
                    pair_add(delta, Word(v.begin(), v.begin() + k), Word(v.begin() + k, v.end()),
                             c);
            for (std::size_t k = 1; k < w.size(); ++k) {
                Word x(w.begin(), w.begin() + k), y(w.begin() + k, w.end());
                Scalar sx = sdeg(x) % 2 == 0 ? Scalar::one(A.field) : -Scalar::one(A.field);
                for (const auto& [vx, cx] : coalgebra_morphism_apply(A, F, x))
                    for (const auto& [vy, cy] : fg_coderivation_apply(A, F, G, H, y))
                        pair_add(delta, vx, vy, -(cx * cy * sx));
                for (const auto& [vx, cx] : fg_coderivation_apply(A, F, G, H, x))
                    for (const auto& [vy, cy] : coalgebra_morphism_apply(A, G, y))
                        pair_add(delta, vx, vy, -(cx * cy));
            }
            if (!delta.empty())
                rep.defects.push_back({n, w, {}});

            /* (ii) F - G = b o H + H o b, corestricted to single outputs. */
            LinComb defect;
            if (const MultiOp* fn = F.comp(n))
                lin_add(defect, fn->apply(w), Scalar::one(A.field));
            if (const MultiOp* gn = G.comp(n))
                lin_add(defect, gn->apply(w), -Scalar::one(A.field));
            for (const auto& [v, c] : hw) {
                const MultiOp* bk = bB.comp(static_cast<int>(v.size()));
                if (bk)
                    lin_add(defect, bk->apply(v), -c);
            }
            for (int r = 0; r < n; ++r)
                for (int s = 1; r + s <= n; ++s) {
                    int u = n - s + 1;
                    const MultiOp* bs = bA.comp(s);
                    const MultiOp* hu = H.comp(u);
                    if (!bs || !hu)
                        continue;
                    for (const auto& [w2, c] :
                         block_apply(A, *bs, static_cast<std::size_t>(r), w, -1))
                        lin_add(defect, hu->apply(w2), -c);
                }
            if (!defect.empty())
                rep.defects.push_back({n, w, defect});
        }
    return rep;
}

CheckReport check_homotopy(const AInfCategory& A, const AInfCategory& B, const AInfMorphism& f,
                           const AInfMorphism& g, const AInfHomotopy& h)
{
    validate_morphism(A, B, f);
    validate_morphism(A, B, g);
    if (f.object_map != g.object_map)
        throw input_error("check_homotopy: morphisms have different object maps");
    return bar_morphism_and_homotopy(A, B, bar_of_ops(A), bar_of_ops(B), bar_of_morphism(A, f),
                                     bar_of_morphism(A, g), bar_of_homotopy(A, h));
}

}  // namespace ainf
