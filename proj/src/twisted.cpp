#include "twisted.h"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace ainf {

/******** Internal helpers ********/

namespace {

/* Largest arity with a nonzero operation; insertions beyond it vanish. */
int za_top_arity(const AInfCategory& ZA)
{
    int top = 0;
    for (const auto& [n, m] : ZA.ops)
        if (!m.is_zero()) top = std::max(top, n);
    return top;
}

std::string entry_name(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

/******** The shift closure ********/

std::size_t ShiftClosure::object_of(const ShiftedObject& s) const
{
    auto it = index.find(s);
    if (it == index.end())
        throw input_error("shift closure: the copy (" + std::to_string(s.object) + ", " +
                          std::to_string(s.shift) + ") is not present");
    return it->second;
}

BasisId ShiftClosure::copy_of(BasisId a, const ShiftedObject& src, const ShiftedObject& dst) const
{
    auto it = copies.find({a, object_of(src), object_of(dst)});
    if (it == copies.end())
        throw input_error("shift closure: no copy of arrow " + std::to_string(a) +
                          " between the given shifted objects");
    return it->second;
}

ShiftClosure shift_category(const AInfCategory& A, const std::vector<ShiftedObject>& entries)
{
    if (A.identities.size() != A.objects.size())
        throw input_error("shift closure: the base category must have strict identities");
    ShiftClosure Z;
    Z.base = A;
    Z.ZA.field = A.field;
    Z.ZA.arity_bound = A.arity_bound;
    for (const auto& s : entries) {
        if (s.object >= A.objects.size())
            throw input_error("shift closure: no object with index " + std::to_string(s.object));
        if (Z.index.count(s))
            throw input_error("shift closure: duplicate shifted copy of object " +
                              A.objects[s.object]);
        Z.index[s] = Z.objects.size();
        Z.objects.push_back(s);
        Z.ZA.objects.push_back(A.objects[s.object] +
                               (s.shift ? "[" + std::to_string(s.shift) + "]" : ""));
    }

    /* available shifted copies per base object, in entry order */
    std::vector<std::vector<std::size_t>> at(A.objects.size());
    for (std::size_t k = 0; k < Z.objects.size(); ++k)
        at[Z.objects[k].object].push_back(k);

    /* one copy of every base arrow per compatible pair of entries; with all
     * shifts zero the ids, names, and degrees reproduce the base exactly */
    for (BasisId a = 0; a < A.basis.size(); ++a) {
        const BasisElem& g = A.basis[a];
        for (std::size_t zs : at[g.src])
            for (std::size_t zd : at[g.dst]) {
                int ssrc = Z.objects[zs].shift, sdst = Z.objects[zd].shift;
                std::string name = g.name;
                if (ssrc || sdst)
                    name += "{" + std::to_string(ssrc) + ">" + std::to_string(sdst) + "}";
                BasisId id = Z.ZA.add_basis(name, g.degree - (sdst - ssrc), zs, zd);
                Z.underlying.push_back(a);
                Z.copies[{a, zs, zd}] = id;
            }
    }
    for (std::size_t k = 0; k < Z.objects.size(); ++k)
        Z.ZA.identities[k] = Z.copies.at({A.identities.at(Z.objects[k].object), k, k});

    /* operations: every entry of the base at every shift assignment of its
     * junctions, signed by collecting the shift components to the right */
    for (const auto& [n, mop] : A.ops) {
        MultiOp& zop = Z.ZA.op_mut(n);
        for (const auto& [w, outc] : mop.entries) {
            std::vector<std::size_t> J(n + 1);     /* junction base objects */
            J[0] = A.basis[w[0]].dst;
            for (int p = 0; p < n; ++p) J[p + 1] = A.basis[w[p]].src;

            std::vector<std::size_t> pick(n + 1, 0);
            while (true) {
                Word zw(n);
                int eps = 0, jump_sum = 0;
                /* eps = sum over p < q of jump_p * deg_q; accumulate the
                 * running jump total and pair it with each new degree */
                for (int p = 0; p < n; ++p) {
                    std::size_t zdst = at[J[p]][pick[p]];
                    std::size_t zsrc = at[J[p + 1]][pick[p + 1]];
                    if (p > 0) eps += jump_sum * A.basis[w[p]].degree;
                    jump_sum += Z.objects[zdst].shift - Z.objects[zsrc].shift;
                    zw[p] = Z.copies.at({w[p], zsrc, zdst});
                }
                std::size_t z0 = at[J[0]][pick[0]], zn = at[J[n]][pick[n]];
                for (const auto& [o, c] : outc)
                    zop.add(zw, Z.copies.at({o, zn, z0}), (eps & 1) ? -c : c);

                int k = n;
                while (k >= 0 && ++pick[k] == at[J[k]].size()) pick[k--] = 0;
                if (k < 0) break;
            }
        }
    }
    Z.ZA.validate();
    return Z;
}

ShiftClosure shift_category(const AInfCategory& A, const std::vector<int>& shifts)
{
    std::vector<ShiftedObject> entries;
    for (std::size_t o = 0; o < A.objects.size(); ++o)
        for (int s : shifts) entries.push_back({o, s});
    return shift_category(A, entries);
}

/******** Twisted objects ********/

/* Shape, membership, triangularity, endpoint, and degree checks. */
static void check_tw_shape(const ShiftClosure& Z, const TwistedObject& T)
{
    std::size_t r = T.size();
    if (T.delta.size() != r)
        throw input_error("twisted object: delta must be a " + std::to_string(r) + "x" +
                          std::to_string(r) + " matrix");
    std::vector<std::size_t> zobj(r);
    for (std::size_t i = 0; i < r; ++i) zobj[i] = Z.object_of(T.seq[i]);
    for (std::size_t i = 0; i < r; ++i) {
        if (T.delta[i].size() != r)
            throw input_error("twisted object: delta row " + std::to_string(i) +
                              " has the wrong length");
        for (std::size_t j = 0; j < r; ++j) {
            if (T.delta[i][j].empty()) continue;
            if (i >= j)
                throw input_error("twisted object: delta is not strictly upper triangular at " +
                                  entry_name(i, j));
            for (const auto& [b, c] : T.delta[i][j]) {
                if (b >= Z.ZA.basis.size())
                    throw input_error("twisted object: unknown arrow in delta " + entry_name(i, j));
                const BasisElem& e = Z.ZA.basis[b];
                if (e.src != zobj[j] || e.dst != zobj[i])
                    throw input_error("twisted object: delta " + entry_name(i, j) +
                                      " must map summand " + std::to_string(j) + " to summand " +
                                      std::to_string(i));
                if (e.degree != 1)
                    throw input_error("twisted object: delta " + entry_name(i, j) +
                                      " must have degree 1");
                (void)c;
            }
        }
    }
}

std::map<std::pair<std::size_t, std::size_t>, LinComb>
mc_defects(const ShiftClosure& Z, const TwistedObject& T)
{
    check_tw_shape(Z, T);
    std::map<std::pair<std::size_t, std::size_t>, LinComb> out;
    const int maxar = za_top_arity(Z.ZA);
    const std::size_t r = T.size();
    const Scalar one = Scalar::one(Z.ZA.field);

    Word word;
    std::function<void(std::size_t, std::size_t, const Scalar&)> walk =
        [&](std::size_t start, std::size_t cur, const Scalar& coef) {
            int t = static_cast<int>(word.size());
            if (t >= 1 && t <= maxar) {
                if (const MultiOp* op = Z.ZA.op(t)) {
                    LinComb val = op->apply(word);
                    if (!val.empty())
                        lin_add(out[{start, cur}], val,
                                ((t * (t - 1) / 2) & 1) ? -coef : coef);
                }
            }
            if (t >= maxar) return;            /* longer chains evaluate to zero */
            for (std::size_t next = cur + 1; next < r; ++next)
                for (const auto& [b, c] : T.delta[cur][next]) {
                    word.push_back(b);
                    walk(start, next, coef * c);
                    word.pop_back();
                }
        };
    for (std::size_t i = 0; i < r; ++i) walk(i, i, one);

    for (auto it = out.begin(); it != out.end();)
        it = it->second.empty() ? out.erase(it) : std::next(it);
    return out;
}

TwistedObject validate_mc(const ShiftClosure& Z, std::vector<ShiftedObject> seq,
                          std::vector<std::vector<LinComb>> delta)
{
    TwistedObject T{std::move(seq), std::move(delta)};
    auto defects = mc_defects(Z, T);
    if (!defects.empty()) {
        const auto& [pos, val] = *defects.begin();
        throw input_error("twisted object: the Maurer-Cartan identity fails at entry " +
                          entry_name(pos.first, pos.second) + " (" +
                          std::to_string(defects.size()) + " defective entries)");
        (void)val;
    }
    return T;
}

/* Internal precondition for operations consuming twisted objects. */
static void require_mc(const ShiftClosure& Z, const TwistedObject& T)
{
    if (!mc_defects(Z, T).empty())
        throw input_error("twisted object: the Maurer-Cartan identity fails");
}

/******** Morphism arithmetic ********/

bool TwMorphism::is_zero() const
{
    for (const auto& row : mat)
        for (const auto& e : row)
            if (!e.empty()) return false;
    return true;
}

TwMorphism tw_zero(const TwistedObject& src, const TwistedObject& dst)
{
    return TwMorphism{std::vector<std::vector<LinComb>>(dst.size(),
                                                        std::vector<LinComb>(src.size()))};
}

TwMorphism tw_identity(const ShiftClosure& Z, const TwistedObject& obj)
{
    TwMorphism f = tw_zero(obj, obj);
    const Scalar one = Scalar::one(Z.ZA.field);
    for (std::size_t i = 0; i < obj.size(); ++i)
        f.mat[i][i] = {{Z.ZA.identities.at(Z.object_of(obj.seq[i])), one}};
    return f;
}

TwMorphism tw_add(const TwMorphism& a, const TwMorphism& b)
{
    if (a.mat.size() != b.mat.size())
        throw input_error("twisted morphisms: shape mismatch in addition");
    TwMorphism out = a;
    const Scalar* any = nullptr;
    for (const auto& row : a.mat)
        for (const auto& e : row)
            if (!e.empty()) { any = &e.begin()->second; break; }
    for (const auto& row : b.mat)
        for (const auto& e : row)
            if (!e.empty()) { any = &e.begin()->second; break; }
    if (!any) return out;
    const Scalar one = Scalar::one(any->field());
    for (std::size_t i = 0; i < b.mat.size(); ++i) {
        if (a.mat[i].size() != b.mat[i].size())
            throw input_error("twisted morphisms: shape mismatch in addition");
        for (std::size_t j = 0; j < b.mat[i].size(); ++j)
            lin_add(out.mat[i][j], b.mat[i][j], one);
    }
    return out;
}

TwMorphism tw_scale(const TwMorphism& a, const Scalar& c)
{
    TwMorphism out = a;
    for (auto& row : out.mat)
        for (auto& e : row) {
            LinComb scaled;
            for (const auto& [b, x] : e) {
                Scalar y = x * c;
                if (!y.is_zero()) scaled[b] = y;
            }
            e = std::move(scaled);
        }
    return out;
}

int insertion_sign(const std::vector<std::pair<bool, int>>& letters)
{
    const int L = static_cast<int>(letters.size());
    int e = 0, argdeg = 0;
    for (int p = 0; p < L; ++p) {
        if (letters[p].first)
            e += (L - 1 - p) + argdeg;
        else
            argdeg += letters[p].second;
    }
    return e & 1;
}

std::vector<std::vector<int>> insertion_patterns(int n, int t)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n + 1, 0);
    std::function<void(int, int)> place = [&](int gap, int left) {
        if (gap == n) {
            cur[gap] = left;
            out.push_back(cur);
            return;
        }
        for (int y = left; y >= 0; --y) {
            /* descending would break lexicographic order; count up instead */
        }
        for (int y = 0; y <= left; ++y) {
            cur[gap] = y;
            place(gap + 1, left - y);
        }
    };
    place(0, t);
    return out;
}

/******** The composition engine ********/

namespace {

/* Depth-first construction of every insertion word for one output row: the
 * walk moves left to right through gap 0, argument 0, gap 1, ..., argument
 * n-1, gap n, carrying the slot reached so far.  Gap g inserts entries of
 * the delta of objs[g], argument g inserts entries of fs[g], and each
 * finished word is evaluated by the ambient operation of its length with
 * the normal-ordering sign of its letter sequence. */
struct TwWalk {
    const ShiftClosure& Z;
    const std::vector<const TwistedObject*>& objs;
    const std::vector<const TwMorphism*>& fs;
    std::size_t n;
    int maxar;
    std::size_t out_row = 0;
    TwMorphism* out = nullptr;

    Word word;
    std::vector<std::pair<bool, int>> letters;

    void gap(std::size_t g, std::size_t slot, const Scalar& coef)
    {
        if (g == n) {
            finish(slot, coef);
        } else if (static_cast<int>(word.size() + (n - g)) <= maxar) {
            const auto& row = fs[g]->mat[slot];
            for (std::size_t c = 0; c < row.size(); ++c)
                for (const auto& [b, cb] : row[c]) {
                    word.push_back(b);
                    letters.emplace_back(false, Z.ZA.basis[b].degree);
                    gap(g + 1, c, coef * cb);
                    word.pop_back();
                    letters.pop_back();
                }
        }
        if (static_cast<int>(word.size() + (n - g)) + 1 > maxar) return;
        const auto& D = objs[g]->delta;
        for (std::size_t next = slot + 1; next < objs[g]->size(); ++next)
            for (const auto& [b, cb] : D[slot][next]) {
                word.push_back(b);
                letters.emplace_back(true, 1);
                gap(g, next, coef * cb);
                word.pop_back();
                letters.pop_back();
            }
    }

    void finish(std::size_t slot, const Scalar& coef)
    {
        const int L = static_cast<int>(word.size());
        if (L == 0 || L > maxar) return;
        const MultiOp* op = Z.ZA.op(L);
        if (!op) return;
        LinComb val = op->apply(word);
        if (val.empty()) return;
        lin_add(out->mat[out_row][slot], val, insertion_sign(letters) ? -coef : coef);
    }
};

TwMorphism tw_compose_raw(const ShiftClosure& Z, const std::vector<const TwistedObject*>& objs,
                          const std::vector<const TwMorphism*>& fs)
{
    const std::size_t n = fs.size();
    if (n == 0 || objs.size() != n + 1)
        throw input_error("twisted composition: n arguments need n + 1 objects");
    for (std::size_t k = 0; k < n; ++k) {
        if (fs[k]->mat.size() != objs[k]->size())
            throw input_error("twisted composition: argument " + std::to_string(k) +
                              " does not match its target");
        for (const auto& row : fs[k]->mat)
            if (row.size() != objs[k + 1]->size())
                throw input_error("twisted composition: argument " + std::to_string(k) +
                                  " does not match its source");
    }
    TwMorphism out = tw_zero(*objs[n], *objs[0]);
    TwWalk walk{Z, objs, fs, n, za_top_arity(Z.ZA)};
    walk.out = &out;
    const Scalar one = Scalar::one(Z.ZA.field);
    for (std::size_t row = 0; row < objs[0]->size(); ++row) {
        walk.out_row = row;
        walk.gap(0, row, one);
    }
    return out;
}

}  // namespace

TwMorphism tw_compose(const ShiftClosure& Z, const std::vector<const TwistedObject*>& objs,
                      const std::vector<const TwMorphism*>& fs)
{
    std::set<const TwistedObject*> seen;
    for (const TwistedObject* T : objs)
        if (seen.insert(T).second) require_mc(Z, *T);
    return tw_compose_raw(Z, objs, fs);
}

/******** The twisted category, materialized ********/

TwMorphism TwCategory::to_matrix(std::size_t src, std::size_t dst, const LinComb& v) const
{
    TwMorphism f = tw_zero(objects.at(src), objects.at(dst));
    for (const auto& [id, c] : v) {
        const ArrowInfo& a = arrows.at(id);
        if (a.src_obj != src || a.dst_obj != dst)
            throw input_error("twisted category: combination not supported on Hom(" +
                              std::to_string(src) + ", " + std::to_string(dst) + ")");
        lin_add(f.mat[a.dst_slot][a.src_slot], a.za, c);
    }
    return f;
}

LinComb TwCategory::to_combo(std::size_t src, std::size_t dst, const TwMorphism& f) const
{
    LinComb v;
    for (std::size_t j = 0; j < f.mat.size(); ++j)
        for (std::size_t i = 0; i < f.mat[j].size(); ++i)
            for (const auto& [b, c] : f.mat[j][i]) {
                auto it = lookup.find({src, dst, i, j, b});
                if (it == lookup.end())
                    throw input_error("twisted category: matrix entry outside Hom(" +
                                      std::to_string(src) + ", " + std::to_string(dst) + ")");
                lin_add(v, it->second, c);
            }
    return v;
}

TwCategory tw_category(const ShiftClosure& Z, const std::vector<TwistedObject>& objects)
{
    TwCategory T;
    T.Z = Z;
    T.objects = objects;
    for (const auto& obj : objects) {
        check_tw_shape(Z, obj);
        auto defects = mc_defects(Z, obj);
        if (!defects.empty())
            throw input_error("twisted category: object violates the Maurer-Cartan identity at "
                              "entry " + entry_name(defects.begin()->first.first,
                                                    defects.begin()->first.second));
    }

    AInfCategory& C = T.C;
    C.field = Z.ZA.field;
    for (std::size_t i = 0; i < objects.size(); ++i)
        C.objects.push_back("tw" + std::to_string(i));

    /* ZA arrows grouped by (src object, dst object) */
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BasisId>> between;
    for (BasisId b = 0; b < Z.ZA.basis.size(); ++b)
        between[{Z.ZA.basis[b].src, Z.ZA.basis[b].dst}].push_back(b);

    for (std::size_t p = 0; p < objects.size(); ++p)
        for (std::size_t q = 0; q < objects.size(); ++q)
            for (std::size_t i = 0; i < objects[p].size(); ++i)
                for (std::size_t j = 0; j < objects[q].size(); ++j) {
                    auto it = between.find({Z.object_of(objects[p].seq[i]),
                                            Z.object_of(objects[q].seq[j])});
                    if (it == between.end()) continue;
                    for (BasisId b : it->second) {
                        std::string name = Z.ZA.basis[b].name + "{" + std::to_string(p) + "." +
                                           std::to_string(i) + ">" + std::to_string(q) + "." +
                                           std::to_string(j) + "}";
                        BasisId id = C.add_basis(name, Z.ZA.basis[b].degree, p, q);
                        T.arrows.push_back({p, i, q, j, b});
                        T.lookup[{p, q, i, j, b}] = id;
                    }
                }

    const int cap = za_top_arity(Z.ZA);
    for (int n = 1; n <= cap; ++n) {
        MultiOp& mop = C.op_mut(n);
        for (const Word& w : C.words(n)) {
            /* the chain of twisted objects along the word, target first */
            std::vector<std::size_t> chain(n + 1);
            chain[0] = C.basis[w[0]].dst;
            for (int k = 0; k < n; ++k) chain[k + 1] = C.basis[w[k]].src;

            std::vector<const TwistedObject*> objv(n + 1);
            for (int k = 0; k <= n; ++k) objv[k] = &T.objects[chain[k]];
            std::vector<TwMorphism> mats;
            mats.reserve(n);
            for (int k = 0; k < n; ++k) {
                const ArrowInfo& a = T.arrows[w[k]];
                TwMorphism m = tw_zero(*objv[k + 1], *objv[k]);
                m.mat[a.dst_slot][a.src_slot] = {{a.za, Scalar::one(C.field)}};
                mats.push_back(std::move(m));
            }
            std::vector<const TwMorphism*> fsv(n);
            for (int k = 0; k < n; ++k) fsv[k] = &mats[k];

            TwMorphism val = tw_compose_raw(Z, objv, fsv);
            for (std::size_t row = 0; row < val.mat.size(); ++row)
                for (std::size_t col = 0; col < val.mat[row].size(); ++col)
                    for (const auto& [b, c] : val.mat[row][col])
                        mop.add(w, T.lookup.at({chain[n], chain[0], col, row, b}), c);
        }
    }
    C.arity_bound = std::max(2, cap);

    for (std::size_t i = 0; i < objects.size(); ++i) {
        LinComb e;
        for (std::size_t s = 0; s < objects[i].size(); ++s)
            lin_add(e, T.lookup.at({i, i, s, s,
                                    Z.ZA.identities.at(Z.object_of(objects[i].seq[s]))}),
                    Scalar::one(C.field));
        T.identity_combo.push_back(std::move(e));
    }
    C.validate();
    return T;
}

/******** Yoneda realization ********/

AInfModule yoneda_realize(const ShiftClosure& Z, const TwistedObject& T)
{
    check_tw_shape(Z, T);
    require_mc(Z, T);
    const AInfCategory& A = Z.base;
    std::vector<std::size_t> z0(A.objects.size());
    for (std::size_t o = 0; o < A.objects.size(); ++o) {
        auto it = Z.index.find({o, 0});
        if (it == Z.index.end())
            throw input_error("yoneda realization: the closure must contain every base object "
                              "at shift 0");
        z0[o] = it->second;
    }

    AInfModule M = make_module(A);
    const std::size_t r = T.size();
    std::vector<std::size_t> zobj(r);
    for (std::size_t i = 0; i < r; ++i) zobj[i] = Z.object_of(T.seq[i]);

    /* one element per (slot, base arrow into the slot's object) */
    std::map<std::pair<std::size_t, BasisId>, BasisId> elem;
    std::vector<std::pair<std::size_t, BasisId>> info;   /* element id - base_size -> (slot, arrow) */
    for (std::size_t i = 0; i < r; ++i)
        for (BasisId a = 0; a < A.basis.size(); ++a) {
            if (A.basis[a].dst != T.seq[i].object) continue;
            BasisId id = M.add_elem(A.basis[a].name + "#" + std::to_string(i),
                                    A.basis[a].degree - T.seq[i].shift, A.basis[a].src);
            elem[{i, a}] = id;
            info.push_back({i, a});
        }

    const int maxar = za_top_arity(Z.ZA);
    const Scalar one = Scalar::one(A.field);
    for (int n = 1; n <= maxar; ++n) {
        for (const Word& w : M.led_words(n)) {
            const auto& [slot, g] = info[w[0] - M.base_size];

            /* the word in the closure: delta chain, then the arrow copy,
             * then the arguments at shift zero */
            Word zw;
            zw.push_back(Z.copies.at({g, z0[A.basis[g].src], zobj[slot]}));
            for (int k = 1; k < n; ++k)
                zw.push_back(Z.copies.at({w[k], z0[A.basis[w[k]].src], z0[A.basis[w[k]].dst]}));

            std::function<void(std::size_t, std::size_t, const Scalar&)> climb =
                [&](std::size_t start, std::size_t cur, const Scalar& coef) {
                    if (cur == slot) {
                        const int t = static_cast<int>(zw.size()) - n;
                        if (n + t > maxar) return;
                        const MultiOp* op = Z.ZA.op(n + t);
                        if (!op) return;
                        LinComb val = op->apply(zw);
                        Scalar c = ((t * (t - 1) / 2) & 1) ? -coef : coef;
                        for (const auto& [b, cb] : val) {
                            auto it = elem.find({start, Z.underlying[b]});
                            if (it == elem.end())
                                throw internal_error("yoneda realization: output outside the "
                                                     "module");
                            M.add_op(w, it->second, c * cb);
                        }
                        return;
                    }
                    if (static_cast<int>(zw.size()) - n >= maxar - n) return;
                    for (std::size_t next = cur + 1; next <= slot; ++next)
                        for (const auto& [b, cb] : T.delta[cur][next]) {
                            zw.insert(zw.begin() + (zw.size() - n), b);
                            climb(start, next, coef * cb);
                            zw.erase(zw.begin() + (zw.size() - 1 - n));
                        }
                };
            for (std::size_t start = 0; start <= slot; ++start) climb(start, start, one);
        }
    }
    M.validate();
    return M;
}

/******** The homotopy category in degree 0 ********/

std::size_t H0Category::hom_dim(std::size_t i, std::size_t j) const
{
    return pairs.at({i, j}).dim();
}

Vec H0Category::compose(std::size_t i, std::size_t j, std::size_t k, const Vec& late,
                        const Vec& early) const
{
    const PairData& pik = pairs.at({i, k});
    Vec out(pik.dim(), Scalar::zero(field));
    auto it = table.find({i, j, k});
    if (it == table.end()) return out;
    for (std::size_t a = 0; a < late.size(); ++a) {
        if (late[a].is_zero()) continue;
        for (std::size_t b = 0; b < early.size(); ++b) {
            if (early[b].is_zero()) continue;
            const Vec& cell = it->second[a][b];
            Scalar c = late[a] * early[b];
            for (std::size_t q = 0; q < out.size(); ++q) out[q] += cell[q] * c;
        }
    }
    return out;
}

H0Category h0_category(const ShiftClosure& Z, const std::vector<TwistedObject>& objects)
{
    const Field& F = Z.ZA.field;
    for (const auto& T : objects) {
        check_tw_shape(Z, T);
        require_mc(Z, T);
    }

    H0Category H;
    H.field = F;
    H.count = objects.size();

    /* per-pair working data beyond what H keeps */
    struct Work {
        std::vector<TwMorphism> reps, bounds;
    };
    std::map<std::pair<std::size_t, std::size_t>, Work> work;

    using Coord = std::tuple<std::size_t, std::size_t, BasisId>;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BasisId>> between;
    for (BasisId b = 0; b < Z.ZA.basis.size(); ++b)
        between[{Z.ZA.basis[b].src, Z.ZA.basis[b].dst}].push_back(b);

    for (std::size_t x = 0; x < objects.size(); ++x)
        for (std::size_t y = 0; y < objects.size(); ++y) {
            const TwistedObject& X = objects[x];
            const TwistedObject& Y = objects[y];

            /* the graded Hom space: components (src slot, dst slot, arrow) */
            GradedSpace V;
            std::map<int, std::vector<Coord>> by_deg;
            std::map<Coord, std::pair<int, std::size_t>> pos;
            for (std::size_t i = 0; i < X.size(); ++i)
                for (std::size_t j = 0; j < Y.size(); ++j) {
                    auto it = between.find({Z.object_of(X.seq[i]), Z.object_of(Y.seq[j])});
                    if (it == between.end()) continue;
                    for (BasisId b : it->second) {
                        int d = Z.ZA.basis[b].degree;
                        V.add(d, std::to_string(i) + ">" + std::to_string(j) + ":" +
                                     Z.ZA.basis[b].name);
                        pos[{i, j, b}] = {d, by_deg[d].size()};
                        by_deg[d].push_back({i, j, b});
                    }
                }

            /* the twisted differential, block by block */
            GradedMap d1 = GradedMap::zero(F, V, V, 1);
            for (const auto& [q, coords] : by_deg) {
                Matrix m(F, V.dim(q + 1), coords.size());
                for (std::size_t c = 0; c < coords.size(); ++c) {
                    const auto& [i, j, b] = coords[c];
                    TwMorphism f = tw_zero(X, Y);
                    f.mat[j][i] = {{b, Scalar::one(F)}};
                    std::vector<const TwistedObject*> objv{&Y, &X};
                    std::vector<const TwMorphism*> fsv{&f};
                    TwMorphism val = tw_compose_raw(Z, objv, fsv);
                    for (std::size_t j2 = 0; j2 < val.mat.size(); ++j2)
                        for (std::size_t i2 = 0; i2 < val.mat[j2].size(); ++i2)
                            for (const auto& [b2, c2] : val.mat[j2][i2]) {
                                auto p = pos.at({i2, j2, b2});
                                if (p.first != q + 1)
                                    throw internal_error("h0: differential is not homogeneous");
                                m.at(p.second, c) += c2;
                            }
                }
                if (m.rows() || m.cols()) d1.set_block(q, std::move(m));
            }
            Homology hm = complex_homology(d1);

            H0Category::PairData pd(F);
            pd.hom = V;
            pd.homology = hm.H;
            auto it0 = by_deg.find(0);
            if (it0 != by_deg.end()) pd.coords = it0->second;
            Matrix reps = hm.i.block(0);
            for (std::size_t c = 0; c < reps.cols(); ++c) pd.reps.push_back(reps.col(c));
            pd.project = hm.p.block(0);
            if (auto bit = hm.boundaries.find(0); bit != hm.boundaries.end())
                pd.boundary0 = bit->second;

            Work wk;
            auto unflatten = [&](const Vec& v) {
                TwMorphism f = tw_zero(X, Y);
                for (std::size_t c = 0; c < pd.coords.size(); ++c) {
                    if (v[c].is_zero()) continue;
                    const auto& [i, j, b] = pd.coords[c];
                    lin_add(f.mat[j][i], b, v[c]);
                }
                return f;
            };
            for (const Vec& v : pd.reps) wk.reps.push_back(unflatten(v));
            for (const Vec& v : pd.boundary0) wk.bounds.push_back(unflatten(v));

            H.pairs.emplace(std::make_pair(x, y), std::move(pd));
            work.emplace(std::make_pair(x, y), std::move(wk));
        }

    /* identity classes from the diagonal strict identities */
    for (std::size_t x = 0; x < objects.size(); ++x) {
        const auto& pd = H.pairs.at({x, x});
        Vec v(pd.coords.size(), Scalar::zero(F));
        for (std::size_t s = 0; s < objects[x].size(); ++s) {
            Coord c{s, s, Z.ZA.identities.at(Z.object_of(objects[x].seq[s]))};
            auto it = std::find(pd.coords.begin(), pd.coords.end(), c);
            if (it == pd.coords.end())
                throw internal_error("h0: identity component missing from degree zero");
            v[it - pd.coords.begin()] = Scalar::one(F);
        }
        H.identity.push_back(pd.project.apply(v));
    }

    /* composition tables, certified well defined on classes */
    for (std::size_t i = 0; i < objects.size(); ++i)
        for (std::size_t j = 0; j < objects.size(); ++j)
            for (std::size_t k = 0; k < objects.size(); ++k) {
                const auto& pij = H.pairs.at({i, j});
                const auto& pjk = H.pairs.at({j, k});
                const auto& pik = H.pairs.at({i, k});
                const Work& wij = work.at({i, j});
                const Work& wjk = work.at({j, k});

                auto composite = [&](const TwMorphism& late, const TwMorphism& early) {
                    std::vector<const TwistedObject*> objv{&objects[k], &objects[j],
                                                           &objects[i]};
                    std::vector<const TwMorphism*> fsv{&late, &early};
                    TwMorphism val = tw_compose_raw(Z, objv, fsv);
                    Vec flat(pik.coords.size(), Scalar::zero(F));
                    for (std::size_t j2 = 0; j2 < val.mat.size(); ++j2)
                        for (std::size_t i2 = 0; i2 < val.mat[j2].size(); ++i2)
                            for (const auto& [b2, c2] : val.mat[j2][i2]) {
                                auto it = std::find(pik.coords.begin(), pik.coords.end(),
                                                    H0Category::PairData::coords
                                                        ::value_type{i2, j2, b2});
                                if (it == pik.coords.end())
                                    throw internal_error("h0: composite leaves degree zero");
                                flat[it - pik.coords.begin()] += c2;
                            }
                    return pik.project.apply(flat);
                };

                if (pjk.dim() && pij.dim()) {
                    std::vector<std::vector<Vec>> cell(pjk.dim(),
                                                       std::vector<Vec>(pij.dim()));
                    for (std::size_t a = 0; a < pjk.dim(); ++a)
                        for (std::size_t b = 0; b < pij.dim(); ++b)
                            cell[a][b] = composite(wjk.reps[a], wij.reps[b]);
                    H.table[{i, j, k}] = std::move(cell);
                }
                for (std::size_t a = 0; a < pjk.dim(); ++a)
                    for (const TwMorphism& bd : wij.bounds) {
                        Vec v = composite(wjk.reps[a], bd);
                        for (const Scalar& s : v)
                            if (!s.is_zero())
                                throw internal_error("h0: composition is not well defined on "
                                                     "classes");
                    }
                for (const TwMorphism& bd : wjk.bounds)
                    for (std::size_t b = 0; b < pij.dim(); ++b) {
                        Vec v = composite(bd, wij.reps[b]);
                        for (const Scalar& s : v)
                            if (!s.is_zero())
                                throw internal_error("h0: composition is not well defined on "
                                                     "classes");
                    }
            }
    return H;
}

H0Category h0_category(const TwCategory& T)
{
    return h0_category(T.Z, T.objects);
}

/******** Isomorphism and indecomposability ********/

namespace {

/* p^k with a hard ceiling; throws when the search space exceeds the cap. */
std::uint64_t checked_pow(std::uint64_t p, std::size_t k, std::uint64_t cap,
                          const std::string& what)
{
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (n > cap / p)
            throw input_error(what + ": search space exceeds the cap of " + std::to_string(cap));
        n *= p;
    }
    if (n > cap)
        throw input_error(what + ": search space of " + std::to_string(n) +
                          " exceeds the cap of " + std::to_string(cap));
    return n;
}

/* Advance a base-p odometer; false when it wraps around to zero. */
bool next_digits(std::vector<std::uint64_t>& d, std::uint64_t p)
{
    for (std::size_t i = d.size(); i-- > 0;) {
        if (++d[i] < p) return true;
        d[i] = 0;
    }
    return false;
}

Vec digits_to_vec(const Field& F, const std::vector<std::uint64_t>& d)
{
    Vec v;
    v.reserve(d.size());
    for (std::uint64_t x : d) v.push_back(Scalar::from_int(F, static_cast<long>(x)));
    return v;
}

bool iso_search(const H0Category& H, std::size_t x, std::size_t y, std::uint64_t cap)
{
    const std::size_t ex = H.hom_dim(x, x), ey = H.hom_dim(y, y);
    if (ex == 0 || ey == 0) return ex == ey;        /* zero objects */
    const std::size_t d1 = H.hom_dim(x, y), d2 = H.hom_dim(y, x);
    if (d1 == 0 || d2 == 0) return false;
    if (H.field.is_rational())
        throw input_error("h0 isomorphism search: unsupported field (the rationals give an "
                          "infinite search space)");
    const std::uint64_t p = H.field.p;
    checked_pow(p, d1, cap, "h0 isomorphism search");

    std::vector<std::uint64_t> digits(d1, 0);
    while (next_digits(digits, p)) {                 /* skips the zero morphism */
        Vec f = digits_to_vec(H.field, digits);
        /* solve g f = 1_x, f g = 1_y for g, linearly */
        Matrix M(H.field, ex + ey, d2);
        for (std::size_t a = 0; a < d2; ++a) {
            Vec ga(d2, Scalar::zero(H.field));
            ga[a] = Scalar::one(H.field);
            Vec gf = H.compose(x, y, x, ga, f);
            Vec fg = H.compose(y, x, y, f, ga);
            for (std::size_t q = 0; q < ex; ++q) M.at(q, a) = gf[q];
            for (std::size_t q = 0; q < ey; ++q) M.at(ex + q, a) = fg[q];
        }
        Vec rhs = H.identity[x];
        rhs.insert(rhs.end(), H.identity[y].begin(), H.identity[y].end());
        if (M.solve(rhs)) return true;
    }
    return false;
}

bool indec_search(const H0Category& H, std::size_t x, std::uint64_t cap)
{
    const std::size_t e = H.hom_dim(x, x);
    if (e == 0) return false;                        /* the zero object */
    if (e == 1) return true;                         /* End = k, no idempotents besides 0, 1 */
    if (H.field.is_rational())
        throw input_error("h0 idempotent search: unsupported field (the rationals give an "
                          "infinite search space)");
    const std::uint64_t p = H.field.p;
    checked_pow(p, e, cap, "h0 idempotent search");

    std::vector<std::uint64_t> digits(e, 0);
    while (next_digits(digits, p)) {
        Vec c = digits_to_vec(H.field, digits);
        if (c == H.identity[x]) continue;
        if (H.compose(x, x, x, c, c) == c) return false;
    }
    return true;
}

}  // namespace

H0IsoIndec h0_iso_and_indec(const H0Category& H, std::size_t x, std::size_t y, std::uint64_t cap)
{
    if (x >= H.count || y >= H.count)
        throw input_error("h0: no such object");
    H0IsoIndec out;
    out.x_indecomposable = indec_search(H, x, cap);
    out.y_indecomposable = (x == y) ? out.x_indecomposable : indec_search(H, y, cap);
    out.isomorphic = (x == y) ? true : iso_search(H, x, y, cap);
    return out;
}

/******** Enumeration of filtered objects ********/

FiltInventory filt_enumerate(const AInfCategory& A, const std::vector<std::size_t>& allowed,
                             const std::vector<int>& dims, const Field& field, std::uint64_t cap)
{
    if (field.is_rational())
        throw input_error("filt enumeration requires a finite field");
    if (A.field != field)
        throw input_error("filt enumeration: the field must match the category");
    if (allowed.size() != dims.size())
        throw input_error("filt enumeration: one multiplicity bound per allowed object");
    for (std::size_t o : allowed)
        if (o >= A.objects.size())
            throw input_error("filt enumeration: no object with index " + std::to_string(o));
    for (int d : dims)
        if (d < 0)
            throw input_error("filt enumeration: negative multiplicity bound");

    ShiftClosure Z = shift_category(A, std::vector<int>{0});
    const std::uint64_t p = field.p;

    /* degree-1 arrows by (dst base object, src base object) */
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BasisId>> deg1;
    for (BasisId a = 0; a < A.basis.size(); ++a)
        if (A.basis[a].degree == 1)
            deg1[{A.basis[a].dst, A.basis[a].src}].push_back(a);

    /* walk the multiplicity vectors; used for both passes */
    auto for_each_mult = [&](auto&& body) {
        std::vector<int> m(allowed.size(), 0);
        while (true) {
            body(m);
            std::size_t k = m.size();
            while (k-- > 0) {
                if (++m[k] <= dims[k]) break;
                m[k] = 0;
                if (k == 0) return;
            }
            if (allowed.empty()) return;
            bool wrapped = true;
            for (int v : m)
                if (v != 0) wrapped = false;
            if (wrapped) return;
        }
    };

    /* pass 1: the search-space size, saturating */
    const std::uint64_t sat = ~std::uint64_t{0} / 2;
    std::uint64_t candidates = 0;
    for_each_mult([&](const std::vector<int>& m) {
        std::vector<std::size_t> seq_obj;
        for (std::size_t k = 0; k < m.size(); ++k)
            for (int c = 0; c < m[k]; ++c) seq_obj.push_back(allowed[k]);
        std::uint64_t count = 1;
        for (std::size_t u = 0; u < seq_obj.size(); ++u)
            for (std::size_t v = u + 1; v < seq_obj.size(); ++v) {
                auto it = deg1.find({seq_obj[u], seq_obj[v]});
                std::size_t slots = it == deg1.end() ? 0 : it->second.size();
                for (std::size_t s = 0; s < slots && count < sat; ++s)
                    count = count > sat / p ? sat : count * p;
            }
        candidates = candidates > sat - count ? sat : candidates + count;
    });
    if (candidates > cap)
        throw input_error("filt enumeration: " + std::to_string(candidates) +
                          " delta candidates exceed the cap of " + std::to_string(cap));

    /* pass 2: enumerate, filter by Maurer-Cartan */
    FiltInventory inv;
    inv.allowed = allowed;
    inv.candidates = candidates;
    std::vector<TwistedObject> found;
    std::vector<std::vector<int>> found_mult;

    for_each_mult([&](const std::vector<int>& m) {
        std::vector<ShiftedObject> seq;
        for (std::size_t k = 0; k < m.size(); ++k)
            for (int c = 0; c < m[k]; ++c) seq.push_back({allowed[k], 0});
        const std::size_t r = seq.size();

        /* flattened delta slots in lexicographic (row, col, arrow) order */
        struct Slot {
            std::size_t u, v;
            BasisId za;
        };
        std::vector<Slot> slots;
        for (std::size_t u = 0; u < r; ++u)
            for (std::size_t v = u + 1; v < r; ++v) {
                auto it = deg1.find({seq[u].object, seq[v].object});
                if (it == deg1.end()) continue;
                for (BasisId a : it->second)
                    slots.push_back({u, v, Z.copies.at({a, Z.index.at({seq[v].object, 0}),
                                                        Z.index.at({seq[u].object, 0})})});
            }

        std::vector<std::uint64_t> digits(slots.size(), 0);
        do {
            std::vector<std::vector<LinComb>> delta(r, std::vector<LinComb>(r));
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (digits[s])
                    delta[slots[s].u][slots[s].v][slots[s].za] =
                        Scalar::from_int(field, static_cast<long>(digits[s]));
            TwistedObject T{seq, std::move(delta)};
            if (mc_defects(Z, T).empty()) {
                found.push_back(std::move(T));
                found_mult.push_back(m);
            }
        } while (next_digits(digits, p));
    });
    inv.mc_valid = found.size();

    /* pass 3: classify up to isomorphism in H^0 */
    H0Category H = h0_category(Z, found);
    std::vector<std::size_t> rep_of_class;
    std::vector<std::size_t> class_of(found.size());
    for (std::size_t u = 0; u < found.size(); ++u) {
        bool placed = false;
        for (std::size_t c = 0; c < rep_of_class.size() && !placed; ++c)
            if (h0_iso_and_indec(H, u, rep_of_class[c], cap).isomorphic) {
                class_of[u] = c;
                placed = true;
            }
        if (!placed) {
            class_of[u] = rep_of_class.size();
            rep_of_class.push_back(u);
        }
    }
    for (std::size_t c = 0; c < rep_of_class.size(); ++c) {
        FiltClass fc;
        fc.rep = found[rep_of_class[c]];
        fc.mult = found_mult[rep_of_class[c]];
        for (std::size_t u = 0; u < found.size(); ++u)
            if (class_of[u] == c) ++fc.size;
        fc.indecomposable = h0_iso_and_indec(H, rep_of_class[c], rep_of_class[c], cap)
                                .x_indecomposable;
        if (fc.indecomposable) ++inv.indecomposable_count;
        inv.classes.push_back(std::move(fc));
    }
    return inv;
}

}  // namespace ainf
