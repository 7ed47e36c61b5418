#include "modules.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace ainf {

/******** AInfModule plumbing ********/

static void require_led_word(const AInfModule& L, const Word& w, const std::string& what)
{
    if (!L.is_led(w))
        throw input_error(what + " entry must start with a module element");
    for (std::size_t k = 1; k < w.size(); ++k)
        if (L.is_module_elem(w[k]))
            throw input_error(what + " entry has a module element past the front");
    if (!L.amb.composable(w))
        throw input_error(what + " entry on a non-composable word");
}

BasisId AInfModule::add_elem(const std::string& name, int degree, std::size_t at_object)
{
    if (at_object >= star)
        throw input_error("module element \"" + name + "\" must sit at a base object");
    return amb.add_basis(name, degree, at_object, star);
}

void AInfModule::add_op(const Word& w, BasisId out, const Scalar& c)
{
    require_led_word(*this, w, "module operation");
    if (out >= amb.basis.size() || !is_module_elem(out))
        throw input_error("module operation output must be a module element");
    int n = static_cast<int>(w.size());
    amb.op_mut(n).add(w, out, c);
    amb.arity_bound = std::max(amb.arity_bound, n);
}

AInfCategory AInfModule::base() const
{
    AInfCategory B;
    B.field = amb.field;
    B.objects.assign(amb.objects.begin(), amb.objects.begin() + static_cast<long>(star));
    B.basis.assign(amb.basis.begin(), amb.basis.begin() + static_cast<long>(base_size));
    B.arity_bound = base_arity_bound;
    B.identities = base_identities;
    for (const auto& [n, m] : amb.ops) {
        MultiOp cut;
        cut.arity = m.arity;
        cut.degree = m.degree;
        for (const auto& [w, out] : m.entries) {
            bool pure = true;
            for (BasisId x : w)
                if (is_module_elem(x))
                    pure = false;
            if (pure)
                cut.entries.emplace(w, out);
        }
        if (!cut.is_zero())
            B.ops.emplace(n, std::move(cut));
    }
    return B;
}

std::vector<Word> AInfModule::led_words(std::size_t n) const
{
    std::vector<Word> acc;
    for (Word& w : amb.words(n))
        if (is_led(w))
            acc.push_back(std::move(w));
    return acc;
}

void AInfModule::validate() const
{
    if (amb.objects.empty() || star != amb.objects.size() - 1)
        throw input_error("module: the star object must be the last object");
    if (base_size > amb.basis.size())
        throw input_error("module: base size exceeds the basis");
    if (!amb.identities.empty())
        throw input_error("module: the ambient carries no strict identities");
    if (base_arity_bound < 1 || base_arity_bound > amb.arity_bound)
        throw input_error("module: base arity bound out of range");
    for (BasisId x = 0; x < amb.basis.size(); ++x) {
        const BasisElem& b = amb.basis[x];
        if (x < base_size && (b.src == star || b.dst == star))
            throw input_error("module: base element \"" + b.name + "\" touches the star object");
        if (x >= base_size && (b.dst != star || b.src == star))
            throw input_error("module element \"" + b.name +
                              "\" must map a base object to the star object");
    }
    for (const auto& [obj, e] : base_identities)
        if (obj >= star || e >= base_size)
            throw input_error("module: base identity bookkeeping out of range");
    for (const auto& [n, m] : amb.ops)
        for (const auto& [w, out] : m.entries) {
            for (std::size_t k = 1; k < w.size(); ++k)
                if (is_module_elem(w[k]))
                    throw input_error("module: operation entry has a module element past the "
                                      "front");
            if (!is_led(w) && n > base_arity_bound)
                throw input_error("module: base operation m_" + std::to_string(n) +
                                  " exceeds the base arity bound");
        }
    amb.validate();
    base().validate();
}

AInfModule make_module(const AInfCategory& A)
{
    AInfModule M;
    M.amb = A;
    std::string nm = "*";
    {
        std::set<std::string> names(A.objects.begin(), A.objects.end());
        while (names.count(nm))
            nm += "'";
    }
    M.amb.objects.push_back(nm);
    M.star = M.amb.objects.size() - 1;
    M.base_size = A.basis.size();
    M.base_arity_bound = A.arity_bound;
    M.base_identities = A.identities;
    M.amb.identities.clear();
    M.validate();
    return M;
}

AInfModule representable_module(const AInfCategory& A, std::size_t x)
{
    if (x >= A.objects.size())
        throw input_error("representable module: object index out of range");
    AInfModule M = make_module(A);
    std::set<std::string> used;
    for (const BasisElem& b : M.amb.basis)
        used.insert(b.name);
    std::map<BasisId, BasisId> starred;
    for (BasisId a = 0; a < M.base_size; ++a) {
        const BasisElem& b = M.amb.basis[a];
        if (b.dst != x)
            continue;
        std::string nm = b.name + "*";
        while (used.count(nm))
            nm += "'";
        used.insert(nm);
        starred.emplace(a, M.add_elem(nm, b.degree, b.src));
    }
    for (const auto& [n, m] : A.ops)
        for (const auto& [w, out] : m.entries) {
            auto it = starred.find(w[0]);
            if (it == starred.end())
                continue;
            Word lw = w;
            lw[0] = it->second;
            for (const auto& [y, c] : out)
                M.add_op(lw, starred.at(y), c);
        }
    M.validate();
    return M;
}

/******** Structure checks ********/

CheckReport check_module(const AInfModule& M)
{
    M.validate();
    if (!check_stasheff(M.base()).pass())
        throw input_error("module: the base category fails its structure identities");
    CheckReport rep;
    int top = 2 * M.amb.arity_bound - 1;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : M.led_words(static_cast<std::size_t>(n))) {
            LinComb d = stasheff_defect(M.amb, n, w);
            if (!d.empty())
                rep.defects.push_back({n, w, d});
        }
    return rep;
}

/******** Module morphisms ********/

/* largest arity carrying a nonzero component */
static int effective_arity(const std::map<int, MultiOp>& comps)
{
    int b = 1;
    for (const auto& [n, m] : comps)
        if (!m.is_zero())
            b = std::max(b, n);
    return b;
}

const MultiOp* ModuleMorphism::comp(int n) const
{
    auto it = comps.find(n);
    return it == comps.end() || it->second.is_zero() ? nullptr : &it->second;
}

MultiOp& ModuleMorphism::comp_mut(int n)
{
    auto it = comps.find(n);
    if (it == comps.end()) {
        MultiOp m;
        m.arity = n;
        m.degree = 1 - n;
        it = comps.emplace(n, std::move(m)).first;
    }
    return it->second;
}

ModuleMorphism ModuleMorphism::identity(const AInfModule& M)
{
    ModuleMorphism f;
    f.arity_bound = 1;
    MultiOp& f1 = f.comp_mut(1);
    for (BasisId e = M.base_size; e < M.amb.basis.size(); ++e)
        f1.add(Word{e}, e, Scalar::one(M.amb.field));
    return f;
}

AInfMorphism ambient_morphism(const AInfModule& L, const AInfModule& M, const ModuleMorphism& f)
{
    if (L.base() != M.base())
        throw input_error("module morphism: source and target have different base categories");
    AInfMorphism F;
    F.object_map.resize(L.amb.objects.size());
    for (std::size_t o = 0; o < L.star; ++o)
        F.object_map[o] = o;
    F.object_map[L.star] = M.star;
    F.arity_bound = effective_arity(f.comps);
    const Scalar one = Scalar::one(L.amb.field);
    MultiOp& F1 = F.comp_mut(1);
    for (BasisId a = 0; a < L.base_size; ++a)
        F1.add(Word{a}, a, one);
    for (const auto& [n, m] : f.comps) {
        if (m.is_zero())
            continue;
        if (n < 1 || m.arity != n || m.degree != 1 - n)
            throw input_error("module morphism component f_" + std::to_string(n) +
                              " has wrong arity/degree");
        for (const auto& [w, out] : m.entries) {
            require_led_word(L, w, "module morphism");
            for (const auto& [y, c] : out)
                if (y >= M.amb.basis.size() || !M.is_module_elem(y))
                    throw input_error("module morphism output must be a module element");
            F.comp_mut(n).add(w, out);
        }
        F.arity_bound = std::max(F.arity_bound, n);
    }
    validate_morphism(L.amb, M.amb, F);
    return F;
}

ModuleMorphismCheck check_module_morphism(const AInfModule& L, const AInfModule& M,
                                          const ModuleMorphism& f)
{
    AInfMorphism F = ambient_morphism(L, M, f);
    ModuleMorphismCheck out;
    int top = L.amb.arity_bound + M.amb.arity_bound;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : L.led_words(static_cast<std::size_t>(n))) {
            LinComb d = morphism_defect(L.amb, M.amb, F, n, w);
            if (!d.empty())
                out.report.defects.push_back({n, w, d});
        }
    out.quasi_iso = is_quasi_iso(L.amb, M.amb, F).quasi_iso;
    return out;
}

ModuleMorphism compose_module_morphisms(const AInfModule& L, const ModuleMorphism& f,
                                        const ModuleMorphism& g)
{
    ModuleMorphism fg;
    fg.arity_bound = std::max(1, effective_arity(f.comps) + effective_arity(g.comps) - 1);
    const Scalar one = Scalar::one(L.amb.field);
    for (int n = 1; n <= fg.arity_bound; ++n) {
        MultiOp comp;
        comp.arity = n;
        comp.degree = 1 - n;
        for (const Word& w : L.led_words(static_cast<std::size_t>(n))) {
            LinComb val;
            for (int r = 1; r <= n; ++r) {
                int s = n - r;
                const MultiOp* gr = g.comp(r);
                const MultiOp* f1s = f.comp(1 + s);
                if (!gr || !f1s)
                    continue;
                Word head(w.begin(), w.begin() + r);
                Scalar sgn = ((r - 1) * s) % 2 == 0 ? one : -one;
                for (const auto& [y, cy] : gr->apply(head)) {
                    Word ww;
                    ww.reserve(static_cast<std::size_t>(1 + s));
                    ww.push_back(y);
                    ww.insert(ww.end(), w.begin() + r, w.end());
                    lin_add(val, f1s->apply(ww), cy * sgn);
                }
            }
            comp.add(w, val);
        }
        if (!comp.is_zero())
            fg.comps.emplace(n, std::move(comp));
    }
    return fg;
}

/******** Nullhomotopies ********/

const MultiOp* ModuleHomotopy::comp(int n) const
{
    auto it = comps.find(n);
    return it == comps.end() || it->second.is_zero() ? nullptr : &it->second;
}

MultiOp& ModuleHomotopy::comp_mut(int n)
{
    auto it = comps.find(n);
    if (it == comps.end()) {
        MultiOp m;
        m.arity = n;
        m.degree = -n;
        it = comps.emplace(n, std::move(m)).first;
    }
    return it->second;
}

static void validate_module_homotopy(const AInfModule& L, const AInfModule& M,
                                     const ModuleHomotopy& h)
{
    for (const auto& [n, m] : h.comps) {
        if (m.is_zero())
            continue;
        if (n < 1 || m.arity != n || m.degree != -n)
            throw input_error("module homotopy component h_" + std::to_string(n) +
                              " has wrong arity/degree");
        for (const auto& [w, out] : m.entries) {
            require_led_word(L, w, "module homotopy");
            int want = L.amb.word_degree(w) - n;
            std::size_t src = L.amb.word_src(w);
            for (const auto& [y, c] : out) {
                if (y >= M.amb.basis.size() || !M.is_module_elem(y))
                    throw input_error("module homotopy output must be a module element");
                if (M.amb.basis[y].degree != want || M.amb.basis[y].src != src)
                    throw input_error("module homotopy output \"" + M.amb.basis[y].name +
                                      "\" violates degree or Hom-pair bookkeeping");
            }
        }
    }
}

CheckReport module_nullhomotopy_check(const AInfModule& L, const AInfModule& M,
                                      const ModuleMorphism& f, const ModuleHomotopy& h)
{
    AInfMorphism F = ambient_morphism(L, M, f);
    validate_module_homotopy(L, M, h);
    int hb = 0;
    for (const auto& [n, m] : h.comps)
        if (!m.is_zero())
            hb = std::max(hb, n);
    int top = std::max({F.arity_bound, hb + L.amb.arity_bound - 1, hb + M.amb.arity_bound - 1, 1});
    const Scalar one = Scalar::one(L.amb.field);
    CheckReport rep;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : L.led_words(static_cast<std::size_t>(n))) {
            LinComb d;
            if (const MultiOp* fn = F.comp(n))
                lin_add(d, fn->apply(w), one);
            /* sum (-1)^{rs} m_{1+s} (h_r (x) 1^s): h is leftmost, no Koszul */
            for (int r = 1; r <= n; ++r) {
                int s = n - r;
                const MultiOp* hr = h.comp(r);
                const MultiOp* ms = M.amb.op(1 + s);
                if (!hr || !ms)
                    continue;
                Word head(w.begin(), w.begin() + r);
                Scalar sgn = (r * s) % 2 == 0 ? one : -one;
                for (const auto& [y, cy] : hr->apply(head)) {
                    Word ww;
                    ww.push_back(y);
                    ww.insert(ww.end(), w.begin() + r, w.end());
                    lin_add(d, ms->apply(ww), -(cy * sgn));
                }
            }
            /* sum (-1)^{r+st} h_u (1^r (x) m_s (x) 1^t) */
            for (int r = 0; r < n; ++r)
                for (int s = 1; r + s <= n; ++s) {
                    int t = n - r - s;
                    int u = r + 1 + t;
                    const MultiOp* ms = L.amb.op(s);
                    const MultiOp* hu = h.comp(u);
                    if (!ms || !hu)
                        continue;
                    Scalar sgn = (r + s * t) % 2 == 0 ? one : -one;
                    for (const auto& [w2, c] : block_apply(L.amb, *ms, r, w))
                        lin_add(d, hu->apply(w2), -(c * sgn));
                }
            if (!d.empty())
                rep.defects.push_back({n, w, d});
        }
    return rep;
}

/******** Suspension ********/

AInfModule suspend_module(const AInfModule& M)
{
    AInfModule S = M;
    for (BasisId x = S.base_size; x < S.amb.basis.size(); ++x)
        S.amb.basis[x].degree -= 1;
    for (auto& [n, m] : S.amb.ops) {
        if (n % 2 == 0)
            continue;
        for (auto& [w, out] : m.entries) {
            if (!S.is_led(w))
                continue;
            for (auto& [y, c] : out)
                c = -c;
        }
    }
    S.validate();
    return S;
}

/******** Restriction ********/

AInfModule restrict_module(const AInfCategory& A, const AInfMorphism& f, const AInfModule& M)
{
    A.validate();
    AInfCategory B = M.base();
    if (!check_morphism(A, B, f).pass())
        throw input_error("restriction: the morphism fails its identities");
    if (!check_module(M).pass())
        throw input_error("restriction: the module fails its identities");
    const Scalar one = Scalar::one(A.field);

    AInfModule R = make_module(A);
    std::set<std::string> used;
    for (const BasisElem& b : R.amb.basis)
        used.insert(b.name);
    /* one copy of each module element of M per base object mapped onto its foot */
    std::map<std::pair<std::size_t, BasisId>, BasisId> copy;
    for (std::size_t x = 0; x < A.objects.size(); ++x)
        for (BasisId e = M.base_size; e < M.amb.basis.size(); ++e) {
            if (M.amb.basis[e].src != f.object_map[x])
                continue;
            std::string nm = M.amb.basis[e].name;
            if (used.count(nm))
                nm += "@" + A.objects[x];
            while (used.count(nm))
                nm += "'";
            used.insert(nm);
            copy.emplace(std::make_pair(x, e), R.add_elem(nm, M.amb.basis[e].degree, x));
        }

    /* the translation morphism R.amb -> M.amb: f on the base, e-copies to e */
    AInfMorphism Fp;
    Fp.object_map.resize(R.amb.objects.size());
    for (std::size_t o = 0; o < A.objects.size(); ++o)
        Fp.object_map[o] = f.object_map[o];
    Fp.object_map[R.star] = M.star;
    Fp.arity_bound = effective_arity(f.comps);
    {
        MultiOp& F1 = Fp.comp_mut(1);
        if (const MultiOp* f1 = f.comp(1))
            for (const auto& [w, out] : f1->entries)
                F1.add(w, out);
        for (const auto& [key, id] : copy)
            F1.add(Word{id}, key.second, one);
    }
    for (const auto& [n, m] : f.comps)
        if (n >= 2 && !m.is_zero())
            for (const auto& [w, out] : m.entries)
                Fp.comp_mut(n).add(w, out);
    validate_morphism(R.amb, M.amb, Fp);

    /* m_n(m, a_2, ..., a_n) = sum (-1)^s m_{r+1} (1 (x) f_{i_1} (x) ... (x) f_{i_r});
     * the sign and the Koszul rule are those of the morphism identity with the
     * module slot as a leading block of size one (which contributes nothing). */
    int cap = std::max(2, (M.amb.arity_bound - 1) * effective_arity(f.comps) + 1);
    for (int n = 1; n <= cap; ++n)
        for (const Word& w : R.led_words(static_cast<std::size_t>(n))) {
            LinComb val;
            for (const auto& parts : compositions(static_cast<std::size_t>(n),
                                                  static_cast<std::size_t>(n))) {
                const MultiOp* mr = M.amb.op(static_cast<int>(parts.size()));
                if (!mr)
                    continue;
                std::vector<const MultiOp*> fs;
                bool missing = false;
                for (std::size_t p : parts) {
                    const MultiOp* fp = Fp.comp(static_cast<int>(p));
                    if (!fp) {
                        missing = true;
                        break;
                    }
                    fs.push_back(fp);
                }
                if (missing)
                    continue;
                Scalar sgn = morphism_rhs_sign(parts) == 1 ? one : -one;
                for (const auto& [w2, c] : ops_apply(R.amb, fs, parts, w))
                    lin_add(val, mr->apply(w2), c * sgn);
            }
            if (val.empty())
                continue;
            std::size_t xsrc = R.amb.word_src(w);
            for (const auto& [e, c] : val)
                R.add_op(w, copy.at({xsrc, e}), c);
        }

    /* tighten the bound to the largest surviving arity before certifying */
    int maxop = 1;
    for (const auto& [n, m] : R.amb.ops)
        if (!m.is_zero())
            maxop = std::max(maxop, n);
    R.amb.arity_bound = std::max({R.base_arity_bound, maxop, 2});

    if (!check_module(R).pass())
        throw internal_error("restriction: the restricted module fails its identities");
    return R;
}

/******** Minimal models ********/

ModuleMinimalModel module_minimal_model(const AInfModule& M, int arity_target)
{
    if (!check_module(M).pass())
        throw input_error("module minimal model: the module fails its identities");
    const Scalar one = Scalar::one(M.amb.field);

    ModuleMinimalModel R;
    R.Hmin = make_module(M.base());

    /* contract the module complex onto its homology, one base object at a time */
    CatLinMap ci, cp, ch; /* ci: Hmin classes -> M.amb; cp, ch on M.amb's module part */
    ci.degree = 0;
    cp.degree = 0;
    ch.degree = -1;
    std::set<std::string> used;
    for (const BasisElem& b : R.Hmin.amb.basis)
        used.insert(b.name);
    for (std::size_t x = 0; x < M.star; ++x) {
        PairBasis pb = pair_basis(M.amb, x, M.star);
        if (pb.space.is_zero())
            continue;
        std::map<std::pair<int, std::size_t>, BasisId> at;
        for (BasisId id : pb.ids)
            at.emplace(pb.locate.at(id), id);
        Homology hom = complex_homology(pair_differential(M.amb, pb));

        std::map<int, std::vector<BasisId>> hids;
        for (const auto& [q, names] : hom.H.by_degree) {
            Matrix bi = hom.i.block(q);
            for (std::size_t j = 0; j < names.size(); ++j) {
                LinComb rep;
                for (std::size_t r = 0; r < bi.rows(); ++r)
                    if (!bi.at(r, j).is_zero())
                        lin_add(rep, at.at({q, r}), bi.at(r, j));
                std::string nm;
                if (rep.size() == 1 && rep.begin()->second == one)
                    nm = M.amb.basis[rep.begin()->first].name;
                else
                    nm = names[j] + "(" + M.amb.objects[x] + ">" + M.amb.objects[M.star] + ")";
                while (used.count(nm))
                    nm += "'";
                used.insert(nm);
                BasisId hid = R.Hmin.add_elem(nm, q, x);
                hids[q].push_back(hid);
                ci.cols[hid] = rep;
            }
        }
        for (BasisId id : pb.ids) {
            auto [q, idx] = pb.locate.at(id);
            Matrix bp = hom.p.block(q);
            LinComb pout;
            for (std::size_t r = 0; r < bp.rows(); ++r)
                if (!bp.at(r, idx).is_zero())
                    lin_add(pout, hids.at(q)[r], bp.at(r, idx));
            if (!pout.empty())
                cp.cols[id] = pout;
            Matrix bh = hom.h.block(q);
            LinComb hout;
            for (std::size_t r = 0; r < bh.rows(); ++r)
                if (!bh.at(r, idx).is_zero())
                    lin_add(hout, at.at({q - 1, r}), bh.at(r, idx));
            if (!hout.empty())
                ch.cols[id] = hout;
        }
    }

    int N = arity_target > 0 ? arity_target : default_arity_target(R.Hmin.amb);
    R.arity_target = N;
    R.Hmin.amb.arity_bound = std::max({R.Hmin.base_arity_bound, N, 2});
    /* the stage loop must reach every arity the final certification will
     * inspect, including base operations above the requested target */
    int top = std::max(N, R.Hmin.base_arity_bound) + M.amb.arity_bound;
    R.f.arity_bound = top;
    {
        MultiOp& f1 = R.f.comp_mut(1);
        for (BasisId hid = R.Hmin.base_size; hid < R.Hmin.amb.basis.size(); ++hid)
            f1.add(Word{hid}, ci.apply(hid));
    }

    const MultiOp* m1M = M.amb.op(1);
    int conv = 1;
    for (int n = 2; n <= top; ++n) {
        auto words = R.Hmin.led_words(static_cast<std::size_t>(n));
        if (words.empty())
            continue;

        std::map<Word, LinComb> cn;
        {
            AInfMorphism F = ambient_morphism(R.Hmin, M, R.f);
            for (const Word& w : words)
                cn.emplace(w, morphism_defect(R.Hmin.amb, M.amb, F, n, w));
        }
        /* the obstruction is a cycle in the full map complex; unlike the
         * category transfer the source differential (the base's m_1) is
         * nonzero, so both summands of d(c) contribute */
        const Scalar csgn = (2 - n) % 2 == 0 ? -one : one;
        const MultiOp* m1H = R.Hmin.amb.op(1);
        for (const Word& w : words) {
            LinComb dc;
            if (m1M)
                for (const auto& [y, cy] : cn.at(w))
                    lin_add(dc, m1M->apply({y}), cy);
            if (m1H)
                for (std::size_t r = 0; r < w.size(); ++r)
                    for (const auto& [w2, cw] : block_apply(R.Hmin.amb, *m1H, r, w))
                        lin_add(dc, cn.at(w2), cw * csgn);
            if (!dc.empty())
                throw internal_error("module transfer: obstruction is not a cycle at arity " +
                                     std::to_string(n));
        }

        bool need = false, p_nonzero = false;
        for (const auto& [w, d] : cn) {
            need = need || !d.empty();
            p_nonzero = p_nonzero || !cp.apply(d).empty();
        }
        if (!need)
            continue;
        if (n > N && p_nonzero)
            throw input_error("module transfer: nonzero operation at arity " + std::to_string(n) +
                              " beyond the requested target " + std::to_string(N));

        bool had_op = R.Hmin.amb.ops.count(n) > 0;
        MultiOp op_snapshot = had_op ? R.Hmin.amb.ops.at(n) : MultiOp{};
        auto install = [&](int sgn) {
            const Scalar pm = sgn > 0 ? -one : one;
            const Scalar fm = -pm;
            MultiOp mn, fn;
            mn.arity = n;
            mn.degree = 2 - n;
            fn.arity = n;
            fn.degree = 1 - n;
            for (const auto& [w, d] : cn) {
                for (const auto& [y, cy] : cp.apply(d))
                    mn.add(w, y, cy * pm);
                for (const auto& [y, cy] : ch.apply(d))
                    fn.add(w, y, cy * fm);
            }
            if (n <= N && !mn.is_zero()) {
                /* merge: the base may already own operations at this arity */
                MultiOp& dst = R.Hmin.amb.op_mut(n);
                for (const auto& [w, out] : mn.entries)
                    dst.add(w, out);
            }
            if (!fn.is_zero())
                R.f.comps.emplace(n, std::move(fn));
        };
        auto uninstall = [&] {
            if (had_op)
                R.Hmin.amb.ops[n] = op_snapshot;
            else
                R.Hmin.amb.ops.erase(n);
            R.f.comps.erase(n);
        };
        auto certified = [&] {
            AInfMorphism F = ambient_morphism(R.Hmin, M, R.f);
            for (const Word& w : words)
                if (!morphism_defect(R.Hmin.amb, M.amb, F, n, w).empty())
                    return false;
            return true;
        };

        install(conv);
        if (!certified()) {
            if (n == 3) {
                uninstall();
                conv = -conv;
                install(conv);
                if (!certified())
                    throw internal_error("module transfer: certification failed at arity 3 "
                                         "under both sign conventions");
            } else {
                throw internal_error("module transfer: certification failed at arity " +
                                     std::to_string(n));
            }
        }
    }

    /* tighten the bounds to the largest surviving arities */
    int maxop = 1;
    for (const auto& [k, m] : R.Hmin.amb.ops)
        if (!m.is_zero())
            maxop = std::max(maxop, k);
    R.Hmin.amb.arity_bound = std::max({R.Hmin.base_arity_bound, maxop, 2});
    R.f.arity_bound = effective_arity(R.f.comps);

    R.Hmin.validate();
    if (!check_module(R.Hmin).pass())
        throw internal_error("module transfer: minimal module fails its identities");
    ModuleMorphismCheck mc = check_module_morphism(R.Hmin, M, R.f);
    if (!mc.report.pass())
        throw internal_error("module transfer: output morphism fails its identities");
    if (!mc.quasi_iso)
        throw internal_error("module transfer: output morphism is not a quasi-isomorphism");
    return R;
}

/******** Homotopy inverses ********/

/* candidate output ids of an unknown component on a led word */
static std::vector<BasisId> module_targets(const AInfModule& T, std::size_t at_object, int degree)
{
    std::vector<BasisId> out;
    for (BasisId y = T.base_size; y < T.amb.basis.size(); ++y)
        if (T.amb.basis[y].src == at_object && T.amb.basis[y].degree == degree)
            out.push_back(y);
    return out;
}

std::optional<ModuleHomotopyInverse> module_homotopy_inverse(const AInfModule& L,
                                                             const AInfModule& M,
                                                             const ModuleMorphism& f, int cap)
{
    if (!check_module_morphism(L, M, f).report.pass())
        throw input_error("homotopy inverse: the morphism fails its identities");
    if (cap <= 0)
        cap = L.amb.arity_bound + M.amb.arity_bound;
    const Field field = L.amb.field;
    const Scalar one = Scalar::one(field);
    int fb = effective_arity(f.comps);
    int top = std::max(L.amb.arity_bound + M.amb.arity_bound,
                       cap + std::max({L.amb.arity_bound, M.amb.arity_bound, fb}));

    /* unknowns: (kind, arity, word, output) with kind 0 = g, 1 = the homotopy
     * on M for f g - 1, 2 = the homotopy on L for g f - 1 */
    using Key = std::tuple<int, int, Word, BasisId>;
    std::map<Key, std::size_t> idx;
    auto enumerate = [&](int kind, const AInfModule& S, const AInfModule& T, int dscale) {
        for (int n = 1; n <= cap; ++n)
            for (const Word& w : S.led_words(static_cast<std::size_t>(n))) {
                int want = S.amb.word_degree(w) + (dscale == 0 ? 1 - n : -n);
                for (BasisId y : module_targets(T, S.amb.word_src(w), want))
                    idx.emplace(Key{kind, n, w, y}, idx.size());
            }
    };
    enumerate(0, M, L, 0);
    enumerate(1, M, M, 1);
    enumerate(2, L, L, 1);

    /* affine rows, grouped per (equation, arity, word): output id -> affine value */
    struct AffGroup {
        std::map<BasisId, std::map<std::size_t, Scalar>> co;
        LinComb cst;
    };
    std::vector<AffGroup> groups;
    auto co_add = [&](std::map<std::size_t, Scalar>& m, std::size_t u, const Scalar& c) {
        auto [it, fresh] = m.emplace(u, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                m.erase(it);
        } else if (c.is_zero()) {
            m.erase(it);
        }
    };
    /* an unknown component applied to a led word: one term per candidate output */
    auto unknown_apply = [&](AffGroup& grp, int kind, const AInfModule& S, const AInfModule& T,
                             int n2, const Word& w2, const Scalar& c,
                             const MultiOp* post /* optional op applied to [y, tail] */,
                             const Word* tail) {
        if (n2 > cap)
            return;
        int want = S.amb.word_degree(w2) + (kind == 0 ? 1 - n2 : -n2);
        for (BasisId y : module_targets(T, S.amb.word_src(w2), want)) {
            std::size_t u = idx.at(Key{kind, n2, w2, y});
            if (!post) {
                co_add(grp.co[y], u, c);
                continue;
            }
            Word ww;
            ww.push_back(y);
            ww.insert(ww.end(), tail->begin(), tail->end());
            for (const auto& [z, cz] : post->apply(ww))
                co_add(grp.co[z], u, c * cz);
        }
    };

    /* E1: g satisfies the morphism identity (source M, target L) */
    for (int n = 1; n <= top; ++n)
        for (const Word& w : M.led_words(static_cast<std::size_t>(n))) {
            AffGroup grp;
            for (int r = 0; r < n; ++r)
                for (int s = 1; r + s <= n; ++s) {
                    int t = n - r - s;
                    int u = r + 1 + t;
                    const MultiOp* ms = M.amb.op(s);
                    if (!ms)
                        continue;
                    Scalar sgn = (r + s * t) % 2 == 0 ? one : -one;
                    for (const auto& [w2, c] : block_apply(M.amb, *ms, r, w))
                        unknown_apply(grp, 0, M, L, u, w2, c * sgn, nullptr, nullptr);
                }
            for (int r = 1; r <= n; ++r) {
                int s = n - r;
                const MultiOp* m1s = L.amb.op(1 + s);
                if (!m1s)
                    continue;
                Word head(w.begin(), w.begin() + r);
                Word tail(w.begin() + r, w.end());
                Scalar sgn = ((r - 1) * s) % 2 == 0 ? -one : one;
                unknown_apply(grp, 0, M, L, r, head, sgn, m1s, &tail);
            }
            groups.push_back(std::move(grp));
        }

    /* E2 on M: (f g)_n - 1_{n=1} = boundary of the kind-1 homotopy;
     * E3 on L: (g f)_n - 1_{n=1} = boundary of the kind-2 homotopy */
    for (int which = 1; which <= 2; ++which) {
        const AInfModule& S = which == 1 ? M : L;
        int kindH = which;
        for (int n = 1; n <= top; ++n)
            for (const Word& w : S.led_words(static_cast<std::size_t>(n))) {
                AffGroup grp;
                /* the composite, linear in g */
                for (int r = 1; r <= n; ++r) {
                    int s = n - r;
                    Word head(w.begin(), w.begin() + r);
                    Word tail(w.begin() + r, w.end());
                    Scalar sgn = ((r - 1) * s) % 2 == 0 ? one : -one;
                    if (which == 1) {
                        /* f_{1+s} (g_r (x) 1^s) */
                        const MultiOp* f1s = f.comp(1 + s);
                        if (!f1s)
                            continue;
                        unknown_apply(grp, 0, M, L, r, head, sgn, f1s, &tail);
                    } else {
                        /* g_{1+s} (f_r (x) 1^s) */
                        const MultiOp* fr = f.comp(r);
                        if (!fr)
                            continue;
                        for (const auto& [y, cy] : fr->apply(head)) {
                            Word ww;
                            ww.push_back(y);
                            ww.insert(ww.end(), tail.begin(), tail.end());
                            unknown_apply(grp, 0, M, L, 1 + s, ww, cy * sgn, nullptr, nullptr);
                        }
                    }
                }
                if (n == 1)
                    lin_add(grp.cst, w[0], -one);
                /* minus the homotopy boundary, all within S */
                for (int r = 1; r <= n; ++r) {
                    int s = n - r;
                    const MultiOp* ms = S.amb.op(1 + s);
                    if (!ms)
                        continue;
                    Word head(w.begin(), w.begin() + r);
                    Word tail(w.begin() + r, w.end());
                    Scalar sgn = (r * s) % 2 == 0 ? -one : one;
                    unknown_apply(grp, kindH, S, S, r, head, sgn, ms, &tail);
                }
                for (int r = 0; r < n; ++r)
                    for (int s = 1; r + s <= n; ++s) {
                        int t = n - r - s;
                        int u = r + 1 + t;
                        const MultiOp* ms = S.amb.op(s);
                        if (!ms)
                            continue;
                        Scalar sgn = (r + s * t) % 2 == 0 ? -one : one;
                        for (const auto& [w2, c] : block_apply(S.amb, *ms, r, w))
                            unknown_apply(grp, kindH, S, S, u, w2, c * sgn, nullptr, nullptr);
                    }
                groups.push_back(std::move(grp));
            }
    }

    /* assemble and solve */
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> triples;
    std::vector<Scalar> rhs;
    for (const AffGroup& grp : groups) {
        std::set<BasisId> targets;
        for (const auto& [y, m] : grp.co)
            if (!m.empty())
                targets.insert(y);
        for (const auto& [y, c] : grp.cst)
            targets.insert(y);
        for (BasisId y : targets) {
            std::size_t row = rhs.size();
            auto it = grp.co.find(y);
            if (it != grp.co.end())
                for (const auto& [u, c] : it->second)
                    triples.emplace_back(row, u, c);
            auto ic = grp.cst.find(y);
            rhs.push_back(ic == grp.cst.end() ? Scalar::zero(field) : -ic->second);
        }
    }
    Matrix sys(field, rhs.size(), idx.size());
    for (const auto& [r, u, c] : triples)
        sys.at(r, u) = c;
    std::optional<Vec> sol = sys.solve(rhs);
    if (!sol)
        return std::nullopt;

    ModuleHomotopyInverse inv;
    inv.g.arity_bound = cap;
    inv.h_fg.arity_bound = cap;
    inv.h_gf.arity_bound = cap;
    for (const auto& [key, u] : idx) {
        const Scalar& c = (*sol)[u];
        if (c.is_zero())
            continue;
        const auto& [kind, n, w, y] = key;
        if (kind == 0)
            inv.g.comp_mut(n).add(w, y, c);
        else if (kind == 1)
            inv.h_fg.comp_mut(n).add(w, y, c);
        else
            inv.h_gf.comp_mut(n).add(w, y, c);
    }

    /* certify through the public checkers before returning */
    if (!check_module_morphism(M, L, inv.g).report.pass())
        throw internal_error("homotopy inverse: solved inverse fails the morphism identities");
    auto minus_identity = [&](ModuleMorphism mm, const AInfModule& S) {
        MultiOp& c1 = mm.comp_mut(1);
        for (BasisId e = S.base_size; e < S.amb.basis.size(); ++e)
            c1.add(Word{e}, e, -one);
        return mm;
    };
    ModuleMorphism fg1 = minus_identity(compose_module_morphisms(M, f, inv.g), M);
    if (!module_nullhomotopy_check(M, M, fg1, inv.h_fg).pass())
        throw internal_error("homotopy inverse: f g - 1 is not bounded by the solved homotopy");
    ModuleMorphism gf1 = minus_identity(compose_module_morphisms(L, inv.g, f), L);
    if (!module_nullhomotopy_check(L, L, gf1, inv.h_gf).pass())
        throw internal_error("homotopy inverse: g f - 1 is not bounded by the solved homotopy");
    return inv;
}

}  // namespace ainf
