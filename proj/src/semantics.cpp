// ============================================================================
// semantics.cpp — Kripke models, eval, bisimulation machinery
// ============================================================================

#include "modalk/semantics.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

namespace modalk {

// ── KripkeModel ─────────────────────────────────────────────────────────────

void KripkeModel::add_world(const std::string& w) {
    if (index_.count(w)) return;
    index_.emplace(w, static_cast<int>(worlds_.size()));
    worlds_.push_back(w);
    succ_.emplace_back();
}

void KripkeModel::add_edge(const std::string& from, const std::string& to) {
    int a = index_of(from), b = index_of(to);
    if (a < 0 || b < 0) throw Error("add_edge: undeclared world");
    auto& out = succ_[a];
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
}

void KripkeModel::set_true(const std::string& letter, const std::string& world) {
    int w = index_of(world);
    if (w < 0) throw Error("set_true: undeclared world '" + world + "'");
    valuation_[letter].insert(w);
}

void KripkeModel::declare_letter(const std::string& letter) { valuation_[letter]; }

bool KripkeModel::has_world(const std::string& w) const { return index_.count(w) > 0; }

bool KripkeModel::has_edge(const std::string& from, const std::string& to) const {
    int a = index_of(from), b = index_of(to);
    if (a < 0 || b < 0) return false;
    const auto& out = succ_[a];
    return std::find(out.begin(), out.end(), b) != out.end();
}

bool KripkeModel::letter_true(const std::string& letter, const std::string& world) const {
    int w = index_of(world);
    if (w < 0) throw Error("letter_true: undeclared world '" + world + "'");
    auto it = valuation_.find(letter);
    return it != valuation_.end() && it->second.count(w) > 0;
}

std::vector<std::string> KripkeModel::successors(const std::string& w) const {
    int a = index_of(w);
    if (a < 0) throw Error("successors: undeclared world '" + w + "'");
    std::vector<std::string> out;
    for (int b : succ_[a]) out.push_back(worlds_[b]);
    return out;
}

SignatureSet KripkeModel::signature() const {
    SignatureSet out;
    for (const auto& [letter, worlds] : valuation_) {
        (void)worlds;
        out.insert(letter);
    }
    return out;
}

int KripkeModel::index_of(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : it->second;
}

KripkeModel KripkeModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    KripkeModel m;
    for (const auto& w : j.at("worlds")) m.add_world(w.get<std::string>());
    if (j.contains("edges"))
        for (const auto& e : j.at("edges"))
            m.add_edge(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    if (j.contains("valuation"))
        for (const auto& [letter, worlds] : j.at("valuation").items()) {
            m.declare_letter(letter);
            for (const auto& w : worlds) m.set_true(letter, w.get<std::string>());
        }
    return m;
}

std::string KripkeModel::to_json() const {
    nlohmann::json j;
    j["worlds"] = worlds_;
    auto edges = nlohmann::json::array();
    for (std::size_t a = 0; a < succ_.size(); ++a) {
        std::vector<int> sorted(succ_[a]);
        std::sort(sorted.begin(), sorted.end());
        for (int b : sorted) edges.push_back({worlds_[a], worlds_[b]});
    }
    j["edges"] = edges;
    auto val = nlohmann::json::object();
    for (const auto& [letter, set] : valuation_) {
        std::vector<std::string> ws;
        for (int w : set) ws.push_back(worlds_[w]);
        val[letter] = ws;
    }
    j["valuation"] = val;
    return j.dump();
}

PointedModel PointedModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PointedModel pm;
    pm.model = KripkeModel::from_json(text);
    if (!j.contains("point")) throw Error("pointed model JSON requires a \"point\" field");
    pm.point = j.at("point").get<std::string>();
    if (!pm.model.has_world(pm.point)) throw Error("point is not a declared world");
    return pm;
}

std::string PointedModel::to_json() const {
    nlohmann::json j = nlohmann::json::parse(model.to_json());
    j["point"] = point;
    return j.dump();
}

bool BisimRelation::contains(const std::string& a, const std::string& b) const {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

// ── eval ────────────────────────────────────────────────────────────────────

namespace {

struct EvalContext {
    const KripkeModel& m;
    std::unordered_map<std::uint64_t, bool> memo;

    bool run(int w, Formula f) {
        std::uint64_t key =
            (static_cast<std::uint64_t>(f.id()) << 24) | static_cast<std::uint32_t>(w);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool out = false;
        switch (kind(f)) {
            case Kind::Prop: {
                auto it = m.valuation().find(std::string(prop_name(f)));
                out = it != m.valuation().end() && it->second.count(w) > 0;
                break;
            }
            case Kind::Top: out = true; break;
            case Kind::Bot: out = false; break;
            case Kind::Neg: out = !run(w, child(f)); break;
            case Kind::And: out = run(w, lhs(f)) && run(w, rhs(f)); break;
            case Kind::Or: out = run(w, lhs(f)) || run(w, rhs(f)); break;
            case Kind::Diamond: {
                for (int v : m.adjacency()[w])
                    if (run(v, child(f))) {
                        out = true;
                        break;
                    }
                break;
            }
            case Kind::Box: {
                out = true;
                for (int v : m.adjacency()[w])
                    if (!run(v, child(f))) {
                        out = false;
                        break;
                    }
                break;
            }
            case Kind::Nabla: {
                auto members = nabla_members(f);
                out = true;
                for (Formula g : members) {
                    bool witnessed = false;
                    for (int v : m.adjacency()[w])
                        if (run(v, g)) {
                            witnessed = true;
                            break;
                        }
                    if (!witnessed) {
                        out = false;
                        break;
                    }
                }
                if (out) {
                    for (int v : m.adjacency()[w]) {
                        bool covered = false;
                        for (Formula g : members)
                            if (run(v, g)) {
                                covered = true;
                                break;
                            }
                        if (!covered) {
                            out = false;
                            break;
                        }
                    }
                }
                break;
            }
        }
        memo.emplace(key, out);
        return out;
    }
};

}  // namespace

bool eval(const KripkeModel& m, const std::string& world, Formula f) {
    int w = m.index_of(world);
    if (w < 0) throw Error("eval: unknown world '" + world + "'");
    EvalContext ctx{m, {}};
    return ctx.run(w, f);
}

// ── Bisimulations ───────────────────────────────────────────────────────────

namespace {

bool atomic_harmony(const KripkeModel& m, const KripkeModel& n, int w, int v,
                    const SignatureSet& sig) {
    for (const auto& p : sig) {
        auto im = m.valuation().find(p);
        auto in = n.valuation().find(p);
        bool at_w = im != m.valuation().end() && im->second.count(w) > 0;
        bool at_v = in != n.valuation().end() && in->second.count(v) > 0;
        if (at_w != at_v) return false;
    }
    return true;
}

}  // namespace

bool check_bisimulation(const KripkeModel& m, const KripkeModel& n, const BisimRelation& z) {
    std::set<std::pair<int, int>> rel;
    for (const auto& [a, b] : z.pairs) {
        int w = m.index_of(a), v = n.index_of(b);
        if (w < 0 || v < 0) throw Error("check_bisimulation: pair references undeclared world");
        rel.emplace(w, v);
    }
    for (const auto& [w, v] : rel) {
        if (!atomic_harmony(m, n, w, v, z.signature)) return false;
        for (int w2 : m.adjacency()[w]) {  // forth
            bool matched = false;
            for (int v2 : n.adjacency()[v])
                if (rel.count({w2, v2})) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
        for (int v2 : n.adjacency()[v]) {  // back
            bool matched = false;
            for (int w2 : m.adjacency()[w])
                if (rel.count({w2, v2})) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
    }
    return true;
}

BisimRelation largest_bisimulation(const KripkeModel& m, const KripkeModel& n,
                                   const SignatureSet& sig) {
    std::size_t nm = m.world_count(), nn = n.world_count();
    std::vector<bool> rel(nm * nn, false);
    auto at = [nn](std::size_t w, std::size_t v) { return w * nn + v; };
    for (std::size_t w = 0; w < nm; ++w)
        for (std::size_t v = 0; v < nn; ++v)
            rel[at(w, v)] = atomic_harmony(m, n, static_cast<int>(w), static_cast<int>(v), sig);

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t w = 0; w < nm; ++w) {
            for (std::size_t v = 0; v < nn; ++v) {
                if (!rel[at(w, v)]) continue;
                bool ok = true;
                for (int w2 : m.adjacency()[w]) {
                    bool matched = false;
                    for (int v2 : n.adjacency()[v])
                        if (rel[at(w2, v2)]) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    for (int v2 : n.adjacency()[v]) {
                        bool matched = false;
                        for (int w2 : m.adjacency()[w])
                            if (rel[at(w2, v2)]) {
                                matched = true;
                                break;
                            }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                if (!ok) {
                    rel[at(w, v)] = false;
                    changed = true;
                }
            }
        }
    }

    BisimRelation out;
    out.signature = sig;
    for (std::size_t w = 0; w < nm; ++w)
        for (std::size_t v = 0; v < nn; ++v)
            if (rel[at(w, v)]) out.pairs.emplace_back(m.worlds()[w], n.worlds()[v]);
    return out;
}

// ── Products and amalgamation ───────────────────────────────────────────────

namespace {

std::string pair_id(const std::string& a, const std::string& b) {
    return "(" + a + "," + b + ")";
}

}  // namespace

KripkeModel bisimulation_product(const KripkeModel& m, const KripkeModel& n,
                                 const BisimRelation& z) {
    if (!check_bisimulation(m, n, z)) throw Error("bisimulation_product: z is not a bisimulation");

    KripkeModel out;
    std::set<std::pair<std::string, std::string>> dom(z.pairs.begin(), z.pairs.end());
    for (const auto& [a, b] : dom) out.add_world(pair_id(a, b));
    for (const auto& [a1, b1] : dom)
        for (const auto& [a2, b2] : dom)
            if (m.has_edge(a1, a2) && n.has_edge(b1, b2))
                out.add_edge(pair_id(a1, b1), pair_id(a2, b2));

    SignatureSet common = set_intersection(m.signature(), n.signature());
    for (const auto& letter : common) {
        out.declare_letter(letter);
        for (const auto& [a, b] : dom)
            if (m.letter_true(letter, a) && n.letter_true(letter, b))
                out.set_true(letter, pair_id(a, b));
    }
    return out;
}

PointedModel amalgamate(const PointedModel& m1, const PointedModel& m2, const BisimRelation& z) {
    if (!z.contains(m1.point, m2.point))
        throw Error("amalgamate: the distinguished pair is not in the bisimulation");

    KripkeModel prod = bisimulation_product(m1.model, m2.model, z);

    SignatureSet s1 = m1.model.signature(), s2 = m2.model.signature();
    for (const auto& letter : set_difference(s1, s2)) {
        prod.declare_letter(letter);
        for (const auto& [a, b] : z.pairs)
            if (m1.model.letter_true(letter, a)) prod.set_true(letter, pair_id(a, b));
    }
    for (const auto& letter : set_difference(s2, s1)) {
        prod.declare_letter(letter);
        for (const auto& [a, b] : z.pairs)
            if (m2.model.letter_true(letter, b)) prod.set_true(letter, pair_id(a, b));
    }
    return PointedModel{std::move(prod), pair_id(m1.point, m2.point)};
}

// ── Unraveling ──────────────────────────────────────────────────────────────

PointedModel unravel(const PointedModel& pm, int depth, int fatness) {
    if (depth < 0 || fatness < 1) throw Error("unravel: depth >= 0 and fatness >= 1 required");

    KripkeModel out;
    const KripkeModel& m = pm.model;
    SignatureSet letters = m.signature();
    for (const auto& letter : letters) out.declare_letter(letter);

    struct Item {
        std::string id;
        int world;
        int remaining;
    };
    std::vector<Item> queue;
    out.add_world(pm.point);
    int root = m.index_of(pm.point);
    if (root < 0) throw Error("unravel: point is not a declared world");
    for (const auto& letter : letters)
        if (m.letter_true(letter, pm.point)) out.set_true(letter, pm.point);
    queue.push_back({pm.point, root, depth});

    while (!queue.empty()) {
        Item item = queue.back();
        queue.pop_back();
        if (item.remaining == 0) continue;
        for (int succ : m.adjacency()[item.world]) {
            for (int k = 0; k < fatness; ++k) {
                std::string id = item.id + "/" + m.worlds()[succ] + ":" + std::to_string(k);
                out.add_world(id);
                out.add_edge(item.id, id);
                for (const auto& letter : letters)
                    if (m.letter_true(letter, m.worlds()[succ])) out.set_true(letter, id);
                queue.push_back({id, succ, item.remaining - 1});
            }
        }
    }
    return PointedModel{std::move(out), pm.point};
}

bool is_tree(const KripkeModel& m, const std::string& root) {
    int r = m.index_of(root);
    if (r < 0) return false;
    // one directed path from the root to every world: no world reached twice
    std::vector<int> seen(m.world_count(), 0);
    std::vector<int> stack{r};
    seen[r] = 1;
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int v : m.adjacency()[w]) {
            if (seen[v]) return false;
            seen[v] = 1;
            stack.push_back(v);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace modalk
