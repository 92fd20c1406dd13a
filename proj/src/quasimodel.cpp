// ============================================================================
// quasimodel.cpp — combined types, elimination engine, Lyndon interpolants
// ============================================================================
//
// The engine keeps side types as bitsets over the two subformula tables and
// identifies a combined type with the flat index li*|R|+ri.  Elimination
// runs in one of two modes with identical final sets:
//
//   * single-step: repeatedly remove the removable type with the smallest
//     index (or a seeded-random priority).  Witness bookkeeping is
//     incremental, keyed by (diamond, box-profile-left, box-profile-right);
//     witness sets depend on a type only through that key.
//
//   * round sweep: for large spaces, remove every removable type per round.
//     Removability is monotone under removal, so any per-round order
//     linearizes into a valid elimination sequence.
//
// ============================================================================

#include "modalk/quasimodel.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "bits.hpp"

namespace modalk {

using detail::Bits;

namespace {

constexpr std::size_t kSingleStepLimit = 400000;   // pairs; above this, round sweeps
constexpr std::size_t kMaterializeLimit = 250000;  // pairs; trace/all_types cap

// ── Side tables ─────────────────────────────────────────────────────────────

struct SideTable {
    std::vector<Formula> table;                    // subf in deterministic order
    std::unordered_map<Formula, int> index;        // formula -> table position
    std::vector<int> box_body;                     // per element: body idx or -1
    std::vector<int> dia_body;                     // per element: body idx or -1
    std::vector<int> and_l, and_r, or_l, or_r;     // child indices or -1
    std::vector<int> literal_letter;               // letter idx or -1
    std::vector<bool> literal_negative;
    std::vector<int> complement;                   // literal complement idx or -1

    std::vector<Bits> types;              // enumerated side types
    std::vector<Bits> box_bodies;         // per type: successor obligations
    std::vector<std::uint64_t> pos, neg;  // per type: letter masks
    std::vector<std::vector<std::uint16_t>> slots;  // per type: diamond slot ids
};

struct SlotInfo {
    Side side;
    int elem;  // table index of the diamond element
    int body;  // table index of its body
};

// ── Engine ──────────────────────────────────────────────────────────────────

struct Engine {
    Formula phi_nnf, negpsi_nnf;
    SideTable L, R;
    std::vector<std::string> letters;
    std::vector<SlotInfo> slots;  // left slots first, then right, in table order

    std::size_t nl = 0, nr = 0, npairs = 0;

    // box-profile interning per side
    std::vector<Bits> prof_l, prof_r;
    std::vector<std::uint32_t> plid, prid;

    // elimination result: order[p] == 0 means surviving
    std::vector<std::uint32_t> order;
    std::vector<std::uint8_t> reason_kind;      // 0 clash, 1 diamond
    std::vector<std::uint16_t> reason_payload;  // clash: letter<<1|side, diamond: slot
    std::uint32_t eliminated = 0;

    std::size_t pair_of(std::size_t li, std::size_t ri) const { return li * nr + ri; }

    int letter_index(const std::string& name) const {
        auto it = std::lower_bound(letters.begin(), letters.end(), name);
        return static_cast<int>(it - letters.begin());
    }

    // ---- construction ----

    void build_table(SideTable& t, Formula root) {
        t.table = subf(root);
        int k = static_cast<int>(t.table.size());
        t.index.reserve(t.table.size());
        for (int i = 0; i < k; ++i) t.index.emplace(t.table[i], i);
        t.box_body.assign(k, -1);
        t.dia_body.assign(k, -1);
        t.and_l.assign(k, -1);
        t.and_r.assign(k, -1);
        t.or_l.assign(k, -1);
        t.or_r.assign(k, -1);
        t.literal_letter.assign(k, -1);
        t.literal_negative.assign(k, false);
        t.complement.assign(k, -1);
    }

    void classify(SideTable& t) {
        int k = static_cast<int>(t.table.size());
        for (int i = 0; i < k; ++i) {
            Formula f = t.table[i];
            switch (kind(f)) {
                case Kind::Prop: {
                    t.literal_letter[i] = letter_index(std::string(prop_name(f)));
                    auto it = t.index.find(neg(f));
                    if (it != t.index.end()) t.complement[i] = it->second;
                    break;
                }
                case Kind::Neg: {
                    t.literal_letter[i] = letter_index(std::string(prop_name(child(f))));
                    t.literal_negative[i] = true;
                    auto it = t.index.find(child(f));
                    if (it != t.index.end()) t.complement[i] = it->second;
                    break;
                }
                case Kind::And:
                    t.and_l[i] = t.index.at(lhs(f));
                    t.and_r[i] = t.index.at(rhs(f));
                    break;
                case Kind::Or:
                    t.or_l[i] = t.index.at(lhs(f));
                    t.or_r[i] = t.index.at(rhs(f));
                    break;
                case Kind::Box: t.box_body[i] = t.index.at(child(f)); break;
                case Kind::Diamond: t.dia_body[i] = t.index.at(child(f)); break;
                default: break;
            }
        }
    }

    void enumerate_locally_consistent(SideTable& t, std::size_t cap) {
        int k = static_cast<int>(t.table.size());
        Bits cur(k);
        std::vector<Bits>& out = t.types;

        // elements are in subformula order, so children precede parents
        std::function<void(int)> rec = [&](int i) {
            if (i == k) {
                out.push_back(cur);
                if (out.size() > cap)
                    throw GuardError("type enumeration exceeded the per-side limit");
                return;
            }
            rec(i + 1);  // element out
            Formula f = t.table[i];
            bool can_in = true;
            switch (kind(f)) {
                case Kind::Bot: can_in = false; break;
                case Kind::And: can_in = cur.test(t.and_l[i]) && cur.test(t.and_r[i]); break;
                case Kind::Or: can_in = cur.test(t.or_l[i]) || cur.test(t.or_r[i]); break;
                case Kind::Prop:
                case Kind::Neg:
                    if (t.complement[i] >= 0 && t.complement[i] < i && cur.test(t.complement[i]))
                        can_in = false;
                    break;
                default: break;
            }
            if (can_in) {
                cur.set(i);
                rec(i + 1);
                cur.reset(i);
            }
        };
        rec(0);
        std::sort(out.begin(), out.end());
    }

    void enumerate_saturated(SideTable& t, std::size_t cap) {
        int k = static_cast<int>(t.table.size());
        // free atoms: literals and modal elements; compounds are computed
        struct Atom {
            int elem;
            int partner;  // complement literal chosen jointly, -1 otherwise
        };
        std::vector<Atom> atoms;
        for (int i = 0; i < k; ++i) {
            Formula f = t.table[i];
            Kind kf = kind(f);
            bool is_literal = kf == Kind::Prop || kf == Kind::Neg;
            bool is_modal = kf == Kind::Box || kf == Kind::Diamond;
            if (!is_literal && !is_modal) continue;
            // the earlier element of a complement pair owns the joint choice
            if (is_literal && t.complement[i] >= 0 && t.complement[i] < i) continue;
            atoms.push_back({i, is_literal ? t.complement[i] : -1});
        }

        Bits cur(k);
        std::vector<Bits>& out = t.types;
        std::function<void(std::size_t)> rec = [&](std::size_t a) {
            if (a == atoms.size()) {
                Bits full = cur;
                for (int i = 0; i < k; ++i) {
                    switch (kind(t.table[i])) {
                        case Kind::Top: full.set(i); break;
                        case Kind::And:
                            if (full.test(t.and_l[i]) && full.test(t.and_r[i])) full.set(i);
                            break;
                        case Kind::Or:
                            if (full.test(t.or_l[i]) || full.test(t.or_r[i])) full.set(i);
                            break;
                        default: break;
                    }
                }
                out.push_back(full);
                if (out.size() > cap)
                    throw GuardError("type enumeration exceeded the per-side limit");
                return;
            }
            const Atom& atom = atoms[a];
            if (atom.partner >= 0) {
                cur.set(atom.elem);
                rec(a + 1);
                cur.reset(atom.elem);
                cur.set(atom.partner);
                rec(a + 1);
                cur.reset(atom.partner);
            } else {
                rec(a + 1);
                cur.set(atom.elem);
                rec(a + 1);
                cur.reset(atom.elem);
            }
        };
        rec(0);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    void type_masks(SideTable& t, Side side) {
        int k = static_cast<int>(t.table.size());
        std::vector<std::uint16_t> slot_of(k, 0xffff);
        for (int i = 0; i < k; ++i)
            if (t.dia_body[i] >= 0) {
                slot_of[i] = static_cast<std::uint16_t>(slots.size());
                slots.push_back({side, i, t.dia_body[i]});
            }

        t.box_bodies.reserve(t.types.size());
        t.pos.reserve(t.types.size());
        t.neg.reserve(t.types.size());
        t.slots.reserve(t.types.size());
        for (const Bits& ty : t.types) {
            Bits bodies(k);
            std::uint64_t pos = 0, negm = 0;
            std::vector<std::uint16_t> sl;
            ty.for_each([&](std::size_t i) {
                int ii = static_cast<int>(i);
                if (t.box_body[ii] >= 0) bodies.set(t.box_body[ii]);
                if (t.dia_body[ii] >= 0) sl.push_back(slot_of[ii]);
                if (t.literal_letter[ii] >= 0) {
                    if (t.literal_negative[ii]) negm |= 1ull << t.literal_letter[ii];
                    else pos |= 1ull << t.literal_letter[ii];
                }
            });
            t.box_bodies.push_back(std::move(bodies));
            t.pos.push_back(pos);
            t.neg.push_back(negm);
            t.slots.push_back(std::move(sl));
        }
    }

    static void intern_profiles(const SideTable& t, std::vector<Bits>& profiles,
                                std::vector<std::uint32_t>& ids) {
        std::map<Bits, std::uint32_t> seen;
        ids.reserve(t.types.size());
        for (const Bits& b : t.box_bodies) {
            auto [it, inserted] = seen.emplace(b, static_cast<std::uint32_t>(profiles.size()));
            if (inserted) profiles.push_back(b);
            ids.push_back(it->second);
        }
    }

    void build(Formula phi, Formula psi, const TypeOptions& opts) {
        phi_nnf = nnf(phi);
        negpsi_nnf = nnf(neg(psi));
        build_table(L, phi_nnf);
        build_table(R, negpsi_nnf);
        if (L.table.size() > opts.max_table_per_side ||
            R.table.size() > opts.max_table_per_side) {
            std::ostringstream os;
            os << "subformula table exceeds the guard (" << L.table.size() << "/"
               << R.table.size() << " vs " << opts.max_table_per_side << " per side)";
            throw GuardError(os.str());
        }

        SignatureSet all = set_union(sig(phi_nnf), sig(negpsi_nnf));
        letters.assign(all.begin(), all.end());
        if (letters.size() > 64) throw GuardError("more than 64 proposition letters");

        classify(L);
        classify(R);

        if (opts.space == TypeSpace::LocallyConsistent) {
            enumerate_locally_consistent(L, opts.max_types_per_side);
            enumerate_locally_consistent(R, opts.max_types_per_side);
        } else {
            enumerate_saturated(L, opts.max_types_per_side);
            enumerate_saturated(R, opts.max_types_per_side);
        }

        type_masks(L, Side::Left);
        type_masks(R, Side::Right);
        intern_profiles(L, prof_l, plid);
        intern_profiles(R, prof_r, prid);

        nl = L.types.size();
        nr = R.types.size();
        npairs = nl * nr;
        order.assign(npairs, 0);
        reason_kind.assign(npairs, 0);
        reason_payload.assign(npairs, 0);
    }

    // lowest clashing letter; payload = letter<<1 | (positive on right ? 1 : 0)
    std::optional<std::uint16_t> clash_payload(std::size_t li, std::size_t ri) const {
        std::uint64_t left_pos = L.pos[li] & R.neg[ri];
        std::uint64_t right_pos = L.neg[li] & R.pos[ri];
        std::uint64_t both = left_pos | right_pos;
        if (!both) return std::nullopt;
        unsigned bit = static_cast<unsigned>(__builtin_ctzll(both));
        bool right = !((left_pos >> bit) & 1u);
        return static_cast<std::uint16_t>((bit << 1) | (right ? 1 : 0));
    }

    // ---- single-step engine ----

    void run_single_step(const TypeOptions& opts) {
        struct Key {
            std::uint16_t slot;
            std::uint32_t pl, pr;
            bool operator<(const Key& o) const {
                return std::tie(slot, pl, pr) < std::tie(o.slot, o.pl, o.pr);
            }
        };
        std::map<Key, std::uint32_t> key_id;
        std::vector<Bits> tl, tr;                      // per key: supporter sets
        std::vector<std::uint64_t> support;            // per key: surviving supporters
        std::vector<std::vector<std::uint32_t>> deps;  // per key: dependent pairs

        auto key_for = [&](std::uint16_t slot, std::size_t li, std::size_t ri) {
            Key k{slot, plid[li], prid[ri]};
            auto it = key_id.find(k);
            if (it != key_id.end()) return it->second;
            std::uint32_t id = static_cast<std::uint32_t>(tl.size());
            key_id.emplace(k, id);
            const SlotInfo& s = slots[slot];
            Bits sl(nl), sr(nr);
            for (std::size_t lj = 0; lj < nl; ++lj) {
                if (!prof_l[k.pl].subset_of(L.types[lj])) continue;
                if (s.side == Side::Left && !L.types[lj].test(s.body)) continue;
                sl.set(lj);
            }
            for (std::size_t rj = 0; rj < nr; ++rj) {
                if (!prof_r[k.pr].subset_of(R.types[rj])) continue;
                if (s.side == Side::Right && !R.types[rj].test(s.body)) continue;
                sr.set(rj);
            }
            support.push_back(static_cast<std::uint64_t>(sl.count()) * sr.count());
            tl.push_back(std::move(sl));
            tr.push_back(std::move(sr));
            deps.emplace_back();
            return id;
        };

        std::vector<std::vector<std::uint32_t>> pair_keys(npairs);
        for (std::size_t li = 0; li < nl; ++li)
            for (std::size_t ri = 0; ri < nr; ++ri) {
                std::size_t p = pair_of(li, ri);
                for (std::uint16_t s : L.slots[li]) pair_keys[p].push_back(key_for(s, li, ri));
                for (std::uint16_t s : R.slots[ri]) pair_keys[p].push_back(key_for(s, li, ri));
                for (std::uint32_t k : pair_keys[p]) deps[k].push_back(static_cast<std::uint32_t>(p));
            }

        std::vector<std::uint64_t> priority;
        if (opts.order_seed) {
            priority.resize(npairs);
            std::mt19937_64 rng(*opts.order_seed);
            for (auto& pr : priority) pr = rng();
        }
        auto prio = [&](std::size_t p) {
            return priority.empty() ? static_cast<std::uint64_t>(p) : priority[p];
        };

        using Entry = std::pair<std::uint64_t, std::uint32_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

        auto removable_now = [&](std::size_t p, std::size_t li, std::size_t ri,
                                 std::uint8_t& kind_out, std::uint16_t& payload_out) {
            if (auto c = clash_payload(li, ri)) {
                kind_out = 0;
                payload_out = *c;
                return true;
            }
            const auto& keys = pair_keys[p];
            for (std::size_t i = 0; i < keys.size(); ++i) {
                if (support[keys[i]] == 0) {
                    kind_out = 1;
                    payload_out = i < L.slots[li].size()
                                      ? L.slots[li][i]
                                      : R.slots[ri][i - L.slots[li].size()];
                    return true;
                }
            }
            return false;
        };

        for (std::size_t li = 0; li < nl; ++li)
            for (std::size_t ri = 0; ri < nr; ++ri) {
                std::size_t p = pair_of(li, ri);
                std::uint8_t k8;
                std::uint16_t pay;
                if (removable_now(p, li, ri, k8, pay))
                    heap.emplace(prio(p), static_cast<std::uint32_t>(p));
            }

        while (!heap.empty()) {
            auto [pri, p] = heap.top();
            heap.pop();
            (void)pri;
            if (order[p] != 0) continue;
            std::size_t li = p / nr, ri = p % nr;
            std::uint8_t k8;
            std::uint16_t pay;
            if (!removable_now(p, li, ri, k8, pay)) continue;  // stale entry
            order[p] = ++eliminated;
            reason_kind[p] = k8;
            reason_payload[p] = pay;

            for (auto& [key, id] : key_id) {
                (void)key;
                if (tl[id].test(li) && tr[id].test(ri)) {
                    if (--support[id] == 0)
                        for (std::uint32_t dep : deps[id])
                            if (order[dep] == 0) heap.emplace(prio(dep), dep);
                }
            }
        }
    }

    // ---- round-sweep engine ----

    void run_rounds() {
        std::vector<Bits> surviving(nl, Bits(nr));
        for (auto& row : surviving)
            for (std::size_t ri = 0; ri < nr; ++ri) row.set(ri);

        // round 0: overlap clashes, in index order
        for (std::size_t li = 0; li < nl; ++li)
            for (std::size_t ri = 0; ri < nr; ++ri)
                if (auto c = clash_payload(li, ri)) {
                    std::size_t p = pair_of(li, ri);
                    order[p] = ++eliminated;
                    reason_kind[p] = 0;
                    reason_payload[p] = *c;
                    surviving[li].reset(ri);
                }

        // static right-side row sets
        std::vector<Bits> right_rows(prof_r.size(), Bits(nr));
        for (std::size_t rj = 0; rj < nr; ++rj)
            for (std::size_t pr = 0; pr < prof_r.size(); ++pr)
                if (prof_r[pr].subset_of(R.types[rj])) right_rows[pr].set(rj);
        std::map<int, Bits> right_body_rows;  // body idx -> right types containing it
        for (const SlotInfo& s : slots)
            if (s.side == Side::Right && !right_body_rows.count(s.body)) {
                Bits rows(nr);
                for (std::size_t rj = 0; rj < nr; ++rj)
                    if (R.types[rj].test(s.body)) rows.set(rj);
                right_body_rows.emplace(s.body, std::move(rows));
            }

        bool changed = true;
        while (changed) {
            changed = false;

            std::map<std::pair<std::uint16_t, std::uint32_t>, Bits> union_cache;
            auto union_rows = [&](std::uint16_t slot, std::uint32_t pl) -> const Bits& {
                auto key = std::make_pair(slot, pl);
                auto it = union_cache.find(key);
                if (it != union_cache.end()) return it->second;
                const SlotInfo& s = slots[slot];
                Bits u(nr);
                for (std::size_t lj = 0; lj < nl; ++lj) {
                    if (!prof_l[pl].subset_of(L.types[lj])) continue;
                    if (s.side == Side::Left && !L.types[lj].test(s.body)) continue;
                    u |= surviving[lj];
                }
                return union_cache.emplace(key, std::move(u)).first->second;
            };
            std::map<std::tuple<std::uint16_t, std::uint32_t, std::uint32_t>, bool> witness_cache;
            auto witnessed = [&](std::uint16_t slot, std::uint32_t pl, std::uint32_t pr) {
                auto key = std::make_tuple(slot, pl, pr);
                auto it = witness_cache.find(key);
                if (it != witness_cache.end()) return it->second;
                const SlotInfo& s = slots[slot];
                const Bits& u = union_rows(slot, pl);
                bool found;
                if (s.side == Side::Left) {
                    found = u.intersects(right_rows[pr]);
                } else {
                    Bits mask = right_rows[pr];
                    mask &= right_body_rows.at(s.body);
                    found = u.intersects(mask);
                }
                witness_cache.emplace(key, found);
                return found;
            };

            std::vector<std::size_t> removals;
            for (std::size_t li = 0; li < nl; ++li) {
                surviving[li].for_each([&](std::size_t ri) {
                    for (std::uint16_t s : L.slots[li])
                        if (!witnessed(s, plid[li], prid[ri])) {
                            removals.push_back(pair_of(li, ri));
                            return;
                        }
                    for (std::uint16_t s : R.slots[ri])
                        if (!witnessed(s, plid[li], prid[ri])) {
                            removals.push_back(pair_of(li, ri));
                            return;
                        }
                });
            }

            for (std::size_t p : removals) {
                std::size_t li = p / nr, ri = p % nr;
                order[p] = ++eliminated;
                reason_kind[p] = 1;
                std::uint16_t slot = 0xffff;
                for (std::uint16_t s : L.slots[li])
                    if (!witnessed(s, plid[li], prid[ri])) {
                        slot = s;
                        break;
                    }
                if (slot == 0xffff)
                    for (std::uint16_t s : R.slots[ri])
                        if (!witnessed(s, plid[li], prid[ri])) {
                            slot = s;
                            break;
                        }
                reason_payload[p] = slot;
                surviving[li].reset(ri);
                changed = true;
            }
        }
    }

    void run(const TypeOptions& opts) {
        if (npairs <= kSingleStepLimit) {
            run_single_step(opts);
        } else {
            if (opts.order_seed)
                throw GuardError("randomized elimination order is limited to small type spaces");
            run_rounds();
        }
    }

    // ---- queries ----

    bool pair_eliminated(std::size_t p) const { return order[p] != 0; }

    bool has_surviving_goal_pair() const {
        int phi_idx = L.index.at(phi_nnf);
        int psi_idx = R.index.at(negpsi_nnf);
        for (std::size_t li = 0; li < nl; ++li) {
            if (!L.types[li].test(phi_idx)) continue;
            for (std::size_t ri = 0; ri < nr; ++ri)
                if (R.types[ri].test(psi_idx) && !pair_eliminated(pair_of(li, ri))) return true;
        }
        return false;
    }

    CombinedType materialize(std::size_t li, std::size_t ri) const {
        CombinedType t;
        L.types[li].for_each([&](std::size_t i) { t.left.push_back(L.table[i]); });
        R.types[ri].for_each([&](std::size_t i) { t.right.push_back(R.table[i]); });
        return t;
    }

    EliminationReason reason_of(std::size_t p) const {
        if (reason_kind[p] == 0) {
            std::uint16_t pay = reason_payload[p];
            return OverlapClash{letters[pay >> 1], (pay & 1) ? Side::Right : Side::Left};
        }
        const SlotInfo& s = slots[reason_payload[p]];
        Formula dia = s.side == Side::Left ? L.table[s.elem] : R.table[s.elem];
        return DiamondUnwitnessed{s.side, dia};
    }
};

// ── Interpolant builder (over the elimination order, with DAG sharing) ──────

struct InterpolantBuilder {
    const Engine& e;
    std::unordered_map<std::uint64_t, std::pair<Formula, std::uint32_t>> pair_memo;
    std::map<std::tuple<std::uint16_t, std::uint32_t, std::uint32_t>,
             std::pair<Formula, std::uint32_t>>
        profile_memo;  // diamond-case formulas with their max referenced order
    std::map<std::tuple<std::size_t, std::uint32_t, std::uint16_t>,
             std::pair<Formula, std::uint32_t>>
        conj_memo;

    static Formula fold_disj(std::vector<Formula> fs) {
        std::sort(fs.begin(), fs.end());
        fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
        return disj_all(fs);
    }
    static Formula fold_conj(std::vector<Formula> fs) {
        std::sort(fs.begin(), fs.end());
        fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
        return conj_all(fs);
    }

    // conjunction over right types viable from profile pr, optionally required
    // to contain the body of need_slot (the right-diamond case)
    std::pair<Formula, std::uint32_t> conj_over_right(std::size_t lj, std::uint32_t pr,
                                                      std::uint16_t need_slot) {
        auto key = std::make_tuple(lj, pr, need_slot);
        if (auto it = conj_memo.find(key); it != conj_memo.end()) return it->second;
        int need_body = need_slot == 0xffff ? -1 : e.slots[need_slot].body;
        std::vector<Formula> terms;
        std::uint32_t max_order = 0;
        for (std::size_t rj = 0; rj < e.nr; ++rj) {
            if (!e.prof_r[pr].subset_of(e.R.types[rj])) continue;
            if (need_body >= 0 && !e.R.types[rj].test(need_body)) continue;
            auto [f, ord] = theta(lj, rj);
            terms.push_back(f);
            max_order = std::max(max_order, ord);
        }
        auto out = std::make_pair(fold_conj(std::move(terms)), max_order);
        conj_memo.emplace(key, out);
        return out;
    }

    // theta for an eliminated pair; second component is the pair's own order
    std::pair<Formula, std::uint32_t> theta(std::size_t li, std::size_t ri) {
        std::size_t p = e.pair_of(li, ri);
        if (!e.pair_eliminated(p))
            throw Error(
                "interpolant construction referenced a surviving type; "
                "the elimination order violates the expected invariant");
        std::uint64_t pk = static_cast<std::uint64_t>(p);
        if (auto it = pair_memo.find(pk); it != pair_memo.end()) return it->second;

        Formula out;
        std::uint32_t own_order = e.order[p];
        if (e.reason_kind[p] == 0) {
            std::uint16_t pay = e.reason_payload[p];
            Formula letter = prop(e.letters[pay >> 1]);
            out = (pay & 1) ? neg(letter) : letter;  // positive on the left picks p
        } else {
            std::uint16_t slot = e.reason_payload[p];
            auto pkey = std::make_tuple(slot, e.plid[li], e.prid[ri]);
            auto hit = profile_memo.find(pkey);
            if (hit != profile_memo.end()) {
                if (hit->second.second >= own_order)
                    throw Error("interpolant cache referenced a later elimination step");
                auto res = std::make_pair(hit->second.first, own_order);
                pair_memo.emplace(pk, res);
                return res;
            }
            const SlotInfo& s = e.slots[slot];
            std::vector<Formula> disjuncts;
            std::uint32_t max_ref = 0;
            if (s.side == Side::Left) {
                for (std::size_t lj = 0; lj < e.nl; ++lj) {
                    if (!e.prof_l[e.plid[li]].subset_of(e.L.types[lj])) continue;
                    if (!e.L.types[lj].test(s.body)) continue;
                    auto [f, ord] = conj_over_right(lj, e.prid[ri], 0xffff);
                    disjuncts.push_back(f);
                    max_ref = std::max(max_ref, ord);
                }
                out = diamond(fold_disj(std::move(disjuncts)));
            } else {
                for (std::size_t lj = 0; lj < e.nl; ++lj) {
                    if (!e.prof_l[e.plid[li]].subset_of(e.L.types[lj])) continue;
                    auto [f, ord] = conj_over_right(lj, e.prid[ri], slot);
                    disjuncts.push_back(f);
                    max_ref = std::max(max_ref, ord);
                }
                out = box(fold_disj(std::move(disjuncts)));
            }
            if (max_ref >= own_order)
                throw Error("interpolant construction referenced a later elimination step");
            profile_memo.emplace(pkey, std::make_pair(out, max_ref));
        }
        auto res = std::make_pair(out, own_order);
        pair_memo.emplace(pk, res);
        return res;
    }
};

}  // namespace

// ── Public API ──────────────────────────────────────────────────────────────

std::vector<CombinedType> all_types(Formula phi, Formula psi, const TypeOptions& opts) {
    Engine e;
    e.build(phi, psi, opts);
    if (e.npairs > kMaterializeLimit) throw GuardError("too many combined types to materialize");
    std::vector<CombinedType> out;
    out.reserve(e.npairs);
    for (std::size_t li = 0; li < e.nl; ++li)
        for (std::size_t ri = 0; ri < e.nr; ++ri) out.push_back(e.materialize(li, ri));
    return out;
}

namespace {

EliminationTrace trace_from_engine(const Engine& e) {
    EliminationTrace trace;
    trace.initial.reserve(e.npairs);
    for (std::size_t li = 0; li < e.nl; ++li)
        for (std::size_t ri = 0; ri < e.nr; ++ri) trace.initial.push_back(e.materialize(li, ri));

    std::vector<std::size_t> eliminated_pairs;
    for (std::size_t p = 0; p < e.npairs; ++p)
        if (e.pair_eliminated(p)) eliminated_pairs.push_back(p);
    std::sort(eliminated_pairs.begin(), eliminated_pairs.end(),
              [&](std::size_t a, std::size_t b) { return e.order[a] < e.order[b]; });
    for (std::size_t p : eliminated_pairs)
        trace.steps.push_back({e.materialize(p / e.nr, p % e.nr), e.reason_of(p)});
    for (std::size_t p = 0; p < e.npairs; ++p)
        if (!e.pair_eliminated(p)) trace.final_set.push_back(e.materialize(p / e.nr, p % e.nr));
    return trace;
}

}  // namespace

EliminationTrace eliminate(Formula phi, Formula psi, const TypeOptions& opts) {
    Engine e;
    e.build(phi, psi, opts);
    if (e.npairs > kMaterializeLimit)
        throw GuardError("too many combined types to materialize a trace");
    e.run(opts);
    return trace_from_engine(e);
}

std::vector<std::uint64_t> surviving_type_indices(Formula phi, Formula psi,
                                                  const TypeOptions& opts) {
    Engine e;
    e.build(phi, psi, opts);
    e.run(opts);
    std::vector<std::uint64_t> out;
    for (std::size_t p = 0; p < e.npairs; ++p)
        if (!e.pair_eliminated(p)) out.push_back(p);
    return out;
}

namespace {

PointedModel witness_from_engine(const Engine& e, std::size_t point_pair) {
    // worlds are the surviving types, edges follow viable succession, and a
    // letter holds where either component contains it
    std::vector<std::size_t> survivors;
    for (std::size_t p = 0; p < e.npairs; ++p)
        if (!e.pair_eliminated(p)) survivors.push_back(p);

    constexpr std::size_t kFullModelCap = 4000;
    std::vector<std::size_t> worlds;
    if (survivors.size() <= kFullModelCap) {
        worlds = survivors;
    } else {
        // reachable closure, taking the lowest viable witness per diamond
        std::vector<std::size_t> queue{point_pair};
        std::set<std::size_t> seen{point_pair};
        while (!queue.empty()) {
            std::size_t p = queue.back();
            queue.pop_back();
            worlds.push_back(p);
            std::size_t li = p / e.nr, ri = p % e.nr;
            auto expand = [&](std::uint16_t slot) {
                const SlotInfo& s = e.slots[slot];
                for (std::size_t q : survivors) {
                    std::size_t lj = q / e.nr, rj = q % e.nr;
                    if (!e.L.box_bodies[li].subset_of(e.L.types[lj])) continue;
                    if (!e.R.box_bodies[ri].subset_of(e.R.types[rj])) continue;
                    bool carries = s.side == Side::Left ? e.L.types[lj].test(s.body)
                                                        : e.R.types[rj].test(s.body);
                    if (!carries) continue;
                    if (seen.insert(q).second) queue.push_back(q);
                    break;
                }
            };
            for (std::uint16_t slot : e.L.slots[li]) expand(slot);
            for (std::uint16_t slot : e.R.slots[ri]) expand(slot);
        }
        std::sort(worlds.begin(), worlds.end());
    }

    KripkeModel m;
    std::map<std::size_t, std::string> name;
    for (std::size_t i = 0; i < worlds.size(); ++i) {
        name[worlds[i]] = "t" + std::to_string(i);
        m.add_world(name[worlds[i]]);
    }
    for (const auto& ell : e.letters) m.declare_letter(ell);
    for (std::size_t p : worlds) {
        std::size_t li = p / e.nr, ri = p % e.nr;
        for (std::size_t q : worlds) {
            std::size_t lj = q / e.nr, rj = q % e.nr;
            if (e.L.box_bodies[li].subset_of(e.L.types[lj]) &&
                e.R.box_bodies[ri].subset_of(e.R.types[rj]))
                m.add_edge(name[p], name[q]);
        }
        auto set_letters = [&](const SideTable& t, std::size_t ti) {
            t.types[ti].for_each([&](std::size_t i) {
                int ii = static_cast<int>(i);
                if (t.literal_letter[ii] >= 0 && !t.literal_negative[ii])
                    m.set_true(e.letters[t.literal_letter[ii]], name[p]);
            });
        };
        set_letters(e.L, li);
        set_letters(e.R, ri);
    }
    return PointedModel{std::move(m), name.at(point_pair)};
}

}  // namespace

SatResult satisfiable(Formula f, const TypeOptions& opts) {
    Engine e;
    e.build(f, bot(), opts);
    e.run(opts);

    SatResult result;
    int phi_idx = e.L.index.at(e.phi_nnf);
    int top_idx = e.R.index.at(e.negpsi_nnf);
    std::optional<std::size_t> goal;
    for (std::size_t li = 0; li < e.nl && !goal; ++li) {
        if (!e.L.types[li].test(phi_idx)) continue;
        for (std::size_t ri = 0; ri < e.nr; ++ri)
            if (e.R.types[ri].test(top_idx) && !e.pair_eliminated(e.pair_of(li, ri))) {
                goal = e.pair_of(li, ri);
                break;
            }
    }
    result.satisfiable = goal.has_value();
    if (goal) result.witness = witness_from_engine(e, *goal);
    if (e.npairs <= kMaterializeLimit) result.trace = trace_from_engine(e);
    return result;
}

bool is_valid_implication(Formula phi, Formula psi, const TypeOptions& opts) {
    Engine e;
    e.build(phi, psi, opts);
    e.run(opts);
    return !e.has_surviving_goal_pair();
}

Formula lyndon_interpolant(Formula phi, Formula psi, const TypeOptions& opts) {
    Engine e;
    e.build(phi, psi, opts);
    e.run(opts);
    if (e.has_surviving_goal_pair())
        throw Error("lyndon_interpolant: the implication is not valid");

    InterpolantBuilder builder{e, {}, {}, {}};
    int phi_idx = e.L.index.at(e.phi_nnf);
    int psi_idx = e.R.index.at(e.negpsi_nnf);
    std::vector<Formula> disjuncts;
    for (std::size_t li = 0; li < e.nl; ++li) {
        if (!e.L.types[li].test(phi_idx)) continue;
        std::vector<Formula> terms;
        for (std::size_t ri = 0; ri < e.nr; ++ri) {
            if (!e.R.types[ri].test(psi_idx)) continue;
            terms.push_back(builder.theta(li, ri).first);
        }
        disjuncts.push_back(InterpolantBuilder::fold_conj(std::move(terms)));
    }
    return InterpolantBuilder::fold_disj(std::move(disjuncts));
}

// ── Trace JSON ──────────────────────────────────────────────────────────────

namespace {

nlohmann::json type_json(const CombinedType& t) {
    nlohmann::json j;
    auto strs = [](const std::vector<Formula>& fs) {
        std::vector<std::string> out;
        out.reserve(fs.size());
        for (Formula f : fs) out.push_back(print(f));
        return out;
    };
    j["L"] = strs(t.left);
    j["R"] = strs(t.right);
    return j;
}

nlohmann::json reason_json(const EliminationReason& r) {
    nlohmann::json j;
    if (const auto* c = std::get_if<OverlapClash>(&r)) {
        j["kind"] = "overlap-clash";
        j["letter"] = c->letter;
        j["side"] = c->positive_side == Side::Left ? "L" : "R";
    } else {
        const auto& d = std::get<DiamondUnwitnessed>(r);
        j["kind"] = "diamond-unwitnessed";
        j["side"] = d.side == Side::Left ? "L" : "R";
        j["diamond"] = print(d.diamond);
    }
    return j;
}

}  // namespace

std::string EliminationTrace::to_json() const {
    nlohmann::json j;
    j["initial_count"] = initial.size();
    auto steps_json = nlohmann::json::array();
    for (const auto& s : steps)
        steps_json.push_back({{"type", type_json(s.type)}, {"reason", reason_json(s.reason)}});
    j["steps"] = steps_json;
    auto final_json = nlohmann::json::array();
    for (const auto& t : final_set) final_json.push_back(type_json(t));
    j["final"] = final_json;
    return j.dump();
}

}  // namespace modalk
