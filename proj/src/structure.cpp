#include "structure.h"

#include <algorithm>

namespace ainf {

/******** Sparse linear helpers ********/

void lin_add(LinComb& acc, BasisId id, const Scalar& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = acc.emplace(id, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            acc.erase(it);
    }
}

void lin_add(LinComb& acc, const LinComb& other, const Scalar& mult)
{
    if (mult.is_zero())
        return;
    for (const auto& [id, c] : other)
        lin_add(acc, id, c * mult);
}

void word_add(WordSum& acc, const Word& w, const Scalar& c)
{
    if (c.is_zero())
        return;
    auto [it, fresh] = acc.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            acc.erase(it);
    }
}

/******** MultiOp ********/

LinComb MultiOp::apply(const Word& w) const
{
    if (w.size() != static_cast<std::size_t>(arity))
        throw internal_error("MultiOp::apply: word length != arity");
    auto it = entries.find(w);
    return it == entries.end() ? LinComb{} : it->second;
}

void MultiOp::add(const Word& w, BasisId out, const Scalar& c)
{
    if (w.size() != static_cast<std::size_t>(arity))
        throw internal_error("MultiOp::add: word length != arity");
    if (c.is_zero())
        return;
    lin_add(entries[w], out, c);
    if (entries[w].empty())
        entries.erase(w);
}

void MultiOp::add(const Word& w, const LinComb& out)
{
    for (const auto& [id, c] : out)
        add(w, id, c);
}

/******** AInfCategory ********/

BasisId AInfCategory::add_basis(const std::string& name, int degree, std::size_t src,
                                std::size_t dst)
{
    if (src >= objects.size() || dst >= objects.size())
        throw input_error("basis element \"" + name + "\" references a missing object");
    for (const auto& b : basis)
        if (b.name == name)
            throw input_error("duplicate basis name \"" + name + "\"");
    basis.push_back(BasisElem{name, degree, src, dst});
    return basis.size() - 1;
}

BasisId AInfCategory::id_of(const std::string& name) const
{
    for (BasisId k = 0; k < basis.size(); ++k)
        if (basis[k].name == name)
            return k;
    throw input_error("basis element \"" + name + "\" not found");
}

const MultiOp* AInfCategory::op(int n) const
{
    auto it = ops.find(n);
    return it == ops.end() || it->second.is_zero() ? nullptr : &it->second;
}

MultiOp& AInfCategory::op_mut(int n)
{
    auto it = ops.find(n);
    if (it == ops.end()) {
        MultiOp m;
        m.arity = n;
        m.degree = 2 - n;
        it = ops.emplace(n, std::move(m)).first;
    }
    return it->second;
}

bool AInfCategory::composable(const Word& w) const
{
    if (w.empty())
        return false;
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (basis[w[k]].src != basis[w[k + 1]].dst)
            return false;
    return true;
}

int AInfCategory::word_degree(const Word& w) const
{
    int d = 0;
    for (BasisId x : w)
        d += basis[x].degree;
    return d;
}

std::size_t AInfCategory::word_src(const Word& w) const
{
    return basis[w.back()].src;
}

std::size_t AInfCategory::word_dst(const Word& w) const
{
    return basis[w.front()].dst;
}

std::vector<Word> AInfCategory::words(std::size_t len) const
{
    /* Group ids by their target object for fast extension on the right. */
    std::vector<std::vector<BasisId>> by_dst(objects.size());
    for (BasisId k = 0; k < basis.size(); ++k)
        by_dst[basis[k].dst].push_back(k);

    std::vector<Word> acc;
    Word cur;
    auto grow = [&](auto&& self) -> void {
        if (cur.size() == len) {
            acc.push_back(cur);
            return;
        }
        const std::vector<BasisId>& next =
            cur.empty() ? std::vector<BasisId>{} : by_dst[basis[cur.back()].src];
        if (cur.empty()) {
            for (BasisId k = 0; k < basis.size(); ++k) {
                cur.push_back(k);
                self(self);
                cur.pop_back();
            }
        } else {
            for (BasisId k : next) {
                cur.push_back(k);
                self(self);
                cur.pop_back();
            }
        }
    };
    if (len > 0)
        grow(grow);
    return acc;
}

void AInfCategory::validate() const
{
    if (objects.empty())
        throw input_error("category has no objects");

    bool concentrated0 = true;
    for (const auto& b : basis)
        if (b.degree != 0)
            concentrated0 = false;

    for (const auto& [n, m] : ops) {
        if (m.is_zero())
            continue;
        if (n < 1)
            throw input_error("operation arity must be >= 1");
        if (n > arity_bound)
            throw input_error("operation m_" + std::to_string(n) +
                              " exceeds the declared arity bound " +
                              std::to_string(arity_bound));
        if (m.arity != n || m.degree != 2 - n)
            throw input_error("operation m_" + std::to_string(n) + " has wrong arity/degree");
        if (concentrated0 && n != 2)
            throw input_error("Hom spaces concentrated in degree 0 admit only m_2, found m_" +
                              std::to_string(n));
        for (const auto& [w, out] : m.entries) {
            if (w.size() != static_cast<std::size_t>(n))
                throw input_error("m_" + std::to_string(n) + " entry with wrong word length");
            for (BasisId x : w)
                if (x >= basis.size())
                    throw input_error("m_" + std::to_string(n) + " entry uses unknown basis id");
            if (!composable(w))
                throw input_error("m_" + std::to_string(n) + " entry on non-composable word (" +
                                  basis[w.front()].name + ", ...)");
            int want = word_degree(w) + 2 - n;
            for (const auto& [y, c] : out) {
                if (y >= basis.size())
                    throw input_error("m_" + std::to_string(n) + " output uses unknown basis id");
                const BasisElem& be = basis[y];
                if (be.degree != want)
                    throw input_error("m_" + std::to_string(n) + " output \"" + be.name +
                                      "\" violates degree bookkeeping");
                if (be.src != word_src(w) || be.dst != word_dst(w))
                    throw input_error("m_" + std::to_string(n) + " output \"" + be.name +
                                      "\" lands in the wrong Hom space");
            }
        }
    }

    /* Strict identities, when declared: e in Hom(A,A) degree 0 with
     * m_2(e, x) = x, m_2(x, e) = x, and every m_n (n != 2) vanishing on
     * words containing e. */
    for (const auto& [obj, e] : identities) {
        if (e >= basis.size())
            throw input_error("identity of object " + std::to_string(obj) + " is unknown");
        const BasisElem& be = basis[e];
        if (be.src != obj || be.dst != obj || be.degree != 0)
            throw input_error("identity \"" + be.name + "\" must lie in Hom(A,A) degree 0");
    }
    if (!identities.empty()) {
        if (identities.size() != objects.size())
            throw input_error("identities must be declared for all objects or none");
        const MultiOp* m2 = op(2);
        for (BasisId x = 0; x < basis.size(); ++x) {
            BasisId el = identities.at(basis[x].dst);
            BasisId er = identities.at(basis[x].src);
            LinComb want{{x, Scalar::one(field)}};
            LinComb left = m2 ? m2->apply(Word{el, x}) : LinComb{};
            LinComb right = m2 ? m2->apply(Word{x, er}) : LinComb{};
            if (left != want)
                throw input_error("strict identity fails: m_2(e, " + basis[x].name + ")");
            if (right != want)
                throw input_error("strict identity fails: m_2(" + basis[x].name + ", e)");
        }
        std::vector<bool> is_id(basis.size(), false);
        for (const auto& [obj, e] : identities)
            is_id[e] = true;
        for (const auto& [n, m] : ops) {
            if (n == 2)
                continue;
            for (const auto& [w, out] : m.entries)
                for (BasisId x : w)
                    if (is_id[x] && !out.empty())
                        throw input_error("m_" + std::to_string(n) +
                                          " must vanish on words containing an identity");
        }
    }
}

PairBasis pair_basis(const AInfCategory& A, std::size_t src, std::size_t dst)
{
    PairBasis pb;
    /* Group by degree first (map order), then by ascending id inside. */
    std::map<int, std::vector<BasisId>> by_deg;
    for (BasisId k = 0; k < A.basis.size(); ++k)
        if (A.basis[k].src == src && A.basis[k].dst == dst)
            by_deg[A.basis[k].degree].push_back(k);
    for (const auto& [q, ids] : by_deg)
        for (std::size_t j = 0; j < ids.size(); ++j) {
            pb.space.add(q, A.basis[ids[j]].name);
            pb.ids.push_back(ids[j]);
            pb.locate[ids[j]] = {q, j};
        }
    return pb;
}

/******** AInfMorphism / AInfHomotopy ********/

const MultiOp* AInfMorphism::comp(int n) const
{
    auto it = comps.find(n);
    return it == comps.end() || it->second.is_zero() ? nullptr : &it->second;
}

MultiOp& AInfMorphism::comp_mut(int n)
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

AInfMorphism AInfMorphism::identity(const AInfCategory& A)
{
    AInfMorphism f;
    for (std::size_t k = 0; k < A.objects.size(); ++k)
        f.object_map.push_back(k);
    f.arity_bound = 1;
    MultiOp& f1 = f.comp_mut(1);
    for (BasisId x = 0; x < A.basis.size(); ++x)
        f1.add(Word{x}, x, Scalar::one(A.field));
    return f;
}

bool AInfMorphism::is_identity(const AInfCategory& A) const
{
    for (std::size_t k = 0; k < object_map.size(); ++k)
        if (object_map[k] != k)
            return false;
    for (const auto& [n, m] : comps) {
        if (n == 1)
            continue;
        if (!m.is_zero())
            return false;
    }
    const MultiOp* f1 = comp(1);
    if (!f1)
        return A.basis.empty();
    for (BasisId x = 0; x < A.basis.size(); ++x)
        if (f1->apply(Word{x}) != LinComb{{x, Scalar::one(A.field)}})
            return false;
    return true;
}

const MultiOp* AInfHomotopy::comp(int n) const
{
    auto it = comps.find(n);
    return it == comps.end() || it->second.is_zero() ? nullptr : &it->second;
}

MultiOp& AInfHomotopy::comp_mut(int n)
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

/******** CatLinMap ********/

LinComb CatLinMap::apply(BasisId x) const
{
    auto it = cols.find(x);
    return it == cols.end() ? LinComb{} : it->second;
}

LinComb CatLinMap::apply(const LinComb& v) const
{
    LinComb out;
    for (const auto& [x, c] : v) {
        auto it = cols.find(x);
        if (it != cols.end())
            lin_add(out, it->second, c);
    }
    return out;
}

/******** Koszul evaluators ********/

WordSum block_apply(const AInfCategory& A, const MultiOp& op, std::size_t r, const Word& w,
                    int dshift)
{
    std::size_t s = op.arity;
    if (r + s > w.size())
        throw internal_error("block_apply: block exceeds word");

    long exponent = 0;
    for (std::size_t i = 0; i < r; ++i)
        exponent += static_cast<long>(op.degree) * (A.basis[w[i]].degree + dshift);
    Scalar sign =
        exponent % 2 == 0 ? Scalar::one(A.field) : -Scalar::one(A.field);

    Word mid(w.begin() + r, w.begin() + r + s);
    LinComb out = op.apply(mid);
    WordSum acc;
    for (const auto& [y, c] : out) {
        Word res;
        res.insert(res.end(), w.begin(), w.begin() + r);
        res.push_back(y);
        res.insert(res.end(), w.begin() + r + s, w.end());
        word_add(acc, res, c * sign);
    }
    return acc;
}

WordSum ops_apply(const AInfCategory& A, const std::vector<const MultiOp*>& fs,
                  const std::vector<std::size_t>& arities, const Word& w, int dshift)
{
    if (fs.size() != arities.size())
        throw internal_error("ops_apply: shape mismatch");
    std::size_t total = 0;
    for (std::size_t a : arities)
        total += a;
    if (total != w.size())
        throw internal_error("ops_apply: arities do not cover the word");

    /* Koszul sign: factor j moves past the elements of blocks i < j. */
    long exponent = 0;
    {
        std::size_t pos = 0;
        long left_degree = 0;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            int fdeg = fs[j] ? fs[j]->degree : 0;
            exponent += static_cast<long>(fdeg) * left_degree;
            for (std::size_t k = 0; k < arities[j]; ++k)
                left_degree += A.basis[w[pos + k]].degree + dshift;
            pos += arities[j];
        }
    }
    Scalar sign = exponent % 2 == 0 ? Scalar::one(A.field) : -Scalar::one(A.field);

    /* Per-block outputs. */
    std::vector<LinComb> outs(fs.size());
    {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            Word blk(w.begin() + pos, w.begin() + pos + arities[j]);
            if (fs[j] == nullptr) {
                if (arities[j] != 1)
                    throw internal_error("ops_apply: identity factors have arity 1");
                outs[j] = LinComb{{blk[0], Scalar::one(A.field)}};
            } else {
                if (fs[j]->arity != static_cast<int>(arities[j]))
                    throw internal_error("ops_apply: declared arity disagrees with factor");
                outs[j] = fs[j]->apply(blk);
            }
            pos += arities[j];
        }
    }

    WordSum acc;
    Word key(fs.size(), 0);
    auto expand = [&](auto&& self, std::size_t j, const Scalar& coeff) -> void {
        if (coeff.is_zero())
            return;
        if (j == fs.size()) {
            word_add(acc, key, coeff);
            return;
        }
        for (const auto& [y, c] : outs[j]) {
            key[j] = y;
            self(self, j + 1, coeff * c);
        }
    };
    expand(expand, 0, sign);
    return acc;
}

}  // namespace ainf
