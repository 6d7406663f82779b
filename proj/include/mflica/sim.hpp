#pragma once

#include <optional>
#include <random>
#include <set>

#include "mflica/core.hpp"

namespace mflica {

enum class Model { DM, HM, IC, CM };
enum class EventType { Linear, MergeSplit };

inline std::string to_string(Model m) {
    switch (m) {
        case Model::DM: return "DM";
        case Model::HM: return "HM";
        case Model::IC: return "IC";
        case Model::CM: return "CM";
    }
    return "?";
}
inline std::string to_string(EventType e) {
    return e == EventType::Linear ? "linear" : "merge_split";
}

inline Model model_from_string(const std::string& s) {
    if (s == "DM") return Model::DM;
    if (s == "HM") return Model::HM;
    if (s == "IC") return Model::IC;
    if (s == "CM") return Model::CM;
    throw std::invalid_argument("unknown model '" + s + "'");
}
inline EventType event_type_from_string(const std::string& s) {
    if (s == "linear") return EventType::Linear;
    if (s == "merge_split") return EventType::MergeSplit;
    throw std::invalid_argument("unknown event type '" + s + "'");
}

struct SimConfig {
    Model model = Model::DM;
    EventType event_type = EventType::Linear;
    int n = 30;
    std::size_t t_star = 4000;
    int events = 5;
    int ic_k = 5;          // IC only
    double ic_rho = 0.5;   // IC only
    int cm_informed = 3;   // informed individuals per faction (CM)
    double speed = 1.0;
    double noise_std = -1.0;  // < 0 resolves to 0.05 * speed
    std::uint64_t seed = 1;

    double resolved_noise_std() const { return noise_std < 0.0 ? 0.05 * speed : noise_std; }

    void validate() const {
        if (n < 6) throw std::invalid_argument("sim: need at least 6 individuals");
        if (events < 1) throw std::invalid_argument("sim: events must be >= 1");
        if (t_star != static_cast<std::size_t>(events) * 800)
            throw std::invalid_argument("sim: t* must equal events*800 (scripts run on an 800-step canvas)");
        if (speed <= 0.0) throw std::invalid_argument("sim: speed must be positive");
        if (model == Model::IC) {
            if (ic_k < 1) throw std::invalid_argument("sim: ic_k must be >= 1");
            if (ic_rho <= 0.0 || ic_rho > 1.0) throw std::invalid_argument("sim: ic_rho must lie in (0,1]");
        }
        if (model == Model::CM) {
            if (cm_informed < 1) throw std::invalid_argument("sim: cm_informed must be >= 1");
            const int third = (n - 3) / 3 + 1;  // smallest scripted faction
            if (event_type == EventType::MergeSplit && cm_informed > third)
                throw std::invalid_argument("sim: cm_informed exceeds smallest scripted faction");
        }
    }
};

// One scripted faction interval. Labels used in ground truth are indices
// into the script entry list.
struct ScriptEntry {
    std::size_t t_begin = 0;  // 1-based, inclusive
    std::size_t t_end = 0;    // inclusive
    int leader = 0;           // id in 1..n, 0 for stopped entries
    std::vector<int> members;  // sorted ids, leader included
    std::vector<int> informed;  // nonempty only under CM
    bool stopped = false;
    bool decelerate = false;
    int event_index = 0;
};

// Fig-2-style event tables: four sequential factions for linear events,
// a one-into-three split at 201 and a merge at 401 for merge/split events,
// both ending with a led stop and a fully stopped interval, offset by
// event_index * 800.
inline std::vector<ScriptEntry> event_script(EventType type, int event_index,
                                             int n = 30, int informed_count = 0) {
    if (n < 6) throw std::invalid_argument("event_script: need at least 6 individuals");
    const std::size_t off = static_cast<std::size_t>(event_index) * 800;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;

    auto with_informed = [informed_count](ScriptEntry e) {
        if (informed_count > 0 && !e.stopped) {
            e.informed.push_back(e.leader);
            for (int id : e.members) {
                if (static_cast<int>(e.informed.size()) >= informed_count) break;
                if (id != e.leader) e.informed.push_back(id);
            }
            std::sort(e.informed.begin(), e.informed.end());
        }
        return e;
    };

    std::vector<ScriptEntry> out;
    if (type == EventType::Linear) {
        out.push_back(with_informed({off + 1, off + 200, 1, all, {}, false, false, event_index}));
        out.push_back(with_informed({off + 201, off + 400, 2, all, {}, false, false, event_index}));
        out.push_back(with_informed({off + 401, off + 600, 3, all, {}, false, false, event_index}));
        out.push_back(with_informed({off + 601, off + 700, 4, all, {}, false, true, event_index}));
        out.push_back({off + 701, off + 800, 0, all, {}, true, false, event_index});
    } else {
        // Non-leader ids split into thirds; the old leader joins the first.
        std::vector<int> rest;
        for (int id : all)
            if (id != 2 && id != 3 && id != 4) rest.push_back(id);
        const std::size_t third = (rest.size() + 2) / 3;
        auto take = [&](std::size_t from, std::size_t to, int leader) {
            std::vector<int> m(rest.begin() + static_cast<std::ptrdiff_t>(from),
                               rest.begin() + static_cast<std::ptrdiff_t>(std::min(to, rest.size())));
            m.push_back(leader);
            std::sort(m.begin(), m.end());
            return m;
        };
        out.push_back(with_informed({off + 1, off + 200, 1, all, {}, false, false, event_index}));
        out.push_back(with_informed({off + 201, off + 400, 2, take(0, third, 2), {}, false, false, event_index}));
        out.push_back(with_informed({off + 201, off + 400, 3, take(third, 2 * third, 3), {}, false, false, event_index}));
        out.push_back(with_informed({off + 201, off + 400, 4, take(2 * third, rest.size(), 4), {}, false, false, event_index}));
        out.push_back(with_informed({off + 401, off + 600, 3, all, {}, false, false, event_index}));
        out.push_back(with_informed({off + 601, off + 700, 4, all, {}, false, true, event_index}));
        out.push_back({off + 701, off + 800, 0, all, {}, true, false, event_index});
    }
    return out;
}

// Scripted per-step membership, leader sets and boundaries.
struct GroundTruth {
    Model model = Model::DM;
    EventType event_type = EventType::Linear;
    int n = 0;
    std::size_t t_star = 0;
    std::vector<ScriptEntry> entries;

    // Label (entry index) of the faction containing id at step t, or -1.
    int label_at(std::size_t t, int id) const {
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const auto& entry = entries[e];
            if (entry.stopped || t < entry.t_begin || t > entry.t_end) continue;
            if (std::binary_search(entry.members.begin(), entry.members.end(), id))
                return static_cast<int>(e);
        }
        return -1;
    }

    std::vector<int> active_labels(std::size_t t) const {
        std::vector<int> out;
        for (std::size_t e = 0; e < entries.size(); ++e)
            if (!entries[e].stopped && t >= entries[e].t_begin && t <= entries[e].t_end)
                out.push_back(static_cast<int>(e));
        return out;
    }

    // The leader id, or the informed set when one was scripted.
    std::vector<int> leader_set(int label) const {
        const auto& entry = entries[static_cast<std::size_t>(label)];
        if (!entry.informed.empty()) return entry.informed;
        return {entry.leader};
    }

    // Chain order: leader first, remaining members ascending.
    std::vector<int> hierarchy(int label) const {
        const auto& entry = entries[static_cast<std::size_t>(label)];
        std::vector<int> order{entry.leader};
        for (int id : entry.members)
            if (id != entry.leader) order.push_back(id);
        return order;
    }

    std::vector<std::size_t> boundaries() const {
        std::set<std::size_t> b;
        for (const auto& e : entries) b.insert(e.t_begin);
        return {b.begin(), b.end()};
    }
};

namespace detail {

// Motion constants shared by all models. The gait term keeps displacement
// series structured even with the noise turned off; the noise temperaments
// spread individuals from tight followers to erratic ones.
struct MotionParams {
    // Slow deterministic speed swell. Anything rhythmic on the window scale
    // would let far-apart chain ranks alias onto a wrong cycle, so the only
    // deterministic modulation is far slower than any window.
    double gait_amp = 0.10;
    double gait_period_lo = 250.0;
    double gait_period_hi = 400.0;
    double heading_wiggle_frac = 2.0;  // x noise_std, part of the copied intent
    double heading_wiggle_ar = 0.6;
    double course_drift_std = 1.0;  // slow wander of the pursued course (rad)
    double course_drift_ar = 0.99;
    double leader_noise_frac = 0.4;
    double follower_noise_frac = 1.0;
    double indiv_noise_lo = 0.5;
    double indiv_noise_hi = 1.5;
    double erratic_prob = 0.30;  // chance a non-alpha individual is erratic
    double erratic_lo = 1.0;     // erratic noise temperament range
    double erratic_hi = 1.5;
    double distract_prob = 0.28;  // chance an erratic detaches for an interval
    double distract_ramp = 15.0;  // detach/re-attach blend length
    double distract_speed = 0.5;  // x speed while meandering
    double distract_noise_frac = 0.05;
    double lag_drift_ar = 0.965;  // response delays wander
    double lag_drift_std = 1.7;  // stationary std of the drift
    double target_dist_factor = 0.8;  // x speed x entry duration
    double approach_frac = 0.12;      // tail of each interval spent slowing
    double approach_floor = 0.5;      // residual speed at arrival
    double rampup_steps = 8.0;
    double init_radius = 3.0;         // x speed
    double cm_wiggle_frac = 2.4;      // x noise_std
    double cm_wiggle_ar = 0.9;
    double chase_speed_factor = 1.4;  // IC catch-up cap
    double cm_cohesion_weight = 0.5;
};

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 unit_or_zero(Vec2 v) {
    const double n = v.norm();
    return n < 1e-12 ? Vec2{} : Vec2{v.x / n, v.y / n};
}

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Response ranks. The four potential leaders keep fixed, distinct delays
// chosen so that each upcoming leader reacts faster than the ordinary
// followers and each deposed one lands mid-field with sound out-edges;
// ordinary followers take two to four (drawn afresh each faction interval,
// wandering slowly in between) and erratic ones five, the slowest rank, so
// their flickering never fakes an initiator.
inline constexpr int kAlphaLag[4] = {3, 1, 2, 4};
inline int clamp_lag(double base, double drift) {
    return std::clamp(static_cast<int>(std::lround(base + drift)), 2, 3);
}

// One synchronous activation round of the cascade: every active individual
// tries its k nearest inactive neighbours it has not yet attempted, each
// with success probability rho. Newly activated ids take effect only after
// the round.
struct CascadeState {
    std::vector<char> active;     // by id-1
    std::vector<char> attempted;  // n*n, by (activator-1)*n + (target-1)
};

inline void ic_cascade_round(CascadeState& state, const std::vector<Vec2>& positions,
                             const std::vector<int>& members, int k, double rho,
                             std::mt19937_64& rng) {
    const std::size_t n = state.active.size();
    std::vector<int> newly;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int a : members) {
        if (!state.active[static_cast<std::size_t>(a - 1)]) continue;
        std::vector<std::pair<double, int>> inactive;
        for (int b : members)
            if (!state.active[static_cast<std::size_t>(b - 1)])
                inactive.emplace_back((positions[static_cast<std::size_t>(b - 1)] -
                                       positions[static_cast<std::size_t>(a - 1)]).norm(), b);
        std::sort(inactive.begin(), inactive.end());
        int tried = 0;
        for (const auto& [dist, b] : inactive) {
            if (tried >= k) break;
            ++tried;
            char& mark = state.attempted[static_cast<std::size_t>(a - 1) * n + static_cast<std::size_t>(b - 1)];
            if (mark) continue;
            mark = 1;
            if (coin(rng) < rho) newly.push_back(b);
        }
    }
    for (int b : newly) state.active[static_cast<std::size_t>(b - 1)] = 1;
}

}  // namespace detail

// Deterministic labelled trajectory generation for the four leadership
// models and both event scripts. Same seed, same bytes. The motion
// parameters are part of the generator's definition; overriding them is
// meant for experiments, not for ordinary use.
inline std::pair<Dataset, GroundTruth> simulate(const SimConfig& config,
                                                const detail::MotionParams& mp = {}) {
    config.validate();
    const int n = config.n;
    const std::size_t t_star = config.t_star;
    const double speed = config.speed;
    const double noise_std = config.resolved_noise_std();

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    auto noise2 = [&](double std_dev) {
        const double a = gauss(rng), b = gauss(rng);
        return detail::Vec2{a * std_dev, b * std_dev};
    };

    GroundTruth truth;
    truth.model = config.model;
    truth.event_type = config.event_type;
    truth.n = n;
    truth.t_star = t_star;
    for (int e = 0; e < config.events; ++e) {
        auto table = event_script(config.event_type, e, n,
                                  config.model == Model::CM ? config.cm_informed : 0);
        truth.entries.insert(truth.entries.end(), table.begin(), table.end());
    }

    // Per-individual noise temperament, drawn once. A fraction of the
    // non-alpha individuals follow erratically; the alphas are precise.
    std::vector<double> temperament(static_cast<std::size_t>(n));
    std::vector<char> erratic(static_cast<std::size_t>(n), 0);
    for (int id = 1; id <= n; ++id) {
        double x = mp.indiv_noise_lo + (mp.indiv_noise_hi - mp.indiv_noise_lo) * uniform(rng);
        const bool roll = uniform(rng) < mp.erratic_prob;
        if (id <= 4) {
            x *= 0.5;
        } else if (roll) {
            x = mp.erratic_lo + (mp.erratic_hi - mp.erratic_lo) * uniform(rng);
            erratic[static_cast<std::size_t>(id - 1)] = 1;
        }
        temperament[static_cast<std::size_t>(id - 1)] = x;
    }
    // Response-delay drift, frozen at zero when the noise is off so that the
    // noiseless delayed-copy structure stays exact.
    std::vector<double> lag_drift(static_cast<std::size_t>(n), 0.0);
    const double drift_innovation =
        noise_std > 0.0 ? mp.lag_drift_std * std::sqrt(1.0 - mp.lag_drift_ar * mp.lag_drift_ar) : 0.0;


    // Distraction bouts: an erratic individual occasionally stops imitating
    // and meanders off on its own heading and rhythm for a stretch. The bout
    // motion carries its own gait so the stretch is never featureless.
    // Disabled with the noise.
    struct Distraction {
        std::size_t until = 0;
        std::size_t started = 0;
        detail::Vec2 heading{1.0, 0.0};
    };
    std::vector<Distraction> distraction(static_cast<std::size_t>(n));
    auto distracted = [&](int id, std::size_t t) {
        return erratic[static_cast<std::size_t>(id - 1)] && t < distraction[static_cast<std::size_t>(id - 1)].until;
    };
    // Detachment blends in and out so windows straddling a bout edge still
    // see some of the shared signal.
    auto bout_weight = [&](int id, std::size_t t) {
        const auto& d = distraction[static_cast<std::size_t>(id - 1)];
        const double into = static_cast<double>(t - d.started);
        const double left = static_cast<double>(d.until - t);
        return std::min({1.0, into / mp.distract_ramp, left / mp.distract_ramp});
    };
    auto meander_step = [&](int id) {
        const auto& d = distraction[static_cast<std::size_t>(id - 1)];
        return d.heading * (mp.distract_speed * speed);
    };
    auto blend_if_distracted = [&](int id, std::size_t t, detail::Vec2 step, double envelope) {
        if (!distracted(id, t)) return step;
        const double w = bout_weight(id, t);
        return step * (1.0 - w) + meander_step(id) * (w * envelope);
    };
    // Detached motion is deliberate and quiet; most of the recorded jitter
    // fades with the blend.
    auto bout_noise_scale = [&](int id, std::size_t t) {
        return distracted(id, t) ? 1.0 - (1.0 - mp.distract_noise_frac) * bout_weight(id, t) : 1.0;
    };

    std::vector<detail::Vec2> pos(static_cast<std::size_t>(n));
    for (auto& p : pos) {
        const double r = mp.init_radius * speed * std::sqrt(uniform(rng));
        const double a = 2.0 * M_PI * uniform(rng);
        p = {r * std::cos(a), r * std::sin(a)};
    }

    std::vector<double> series(static_cast<std::size_t>(n) * t_star * 2);
    auto record = [&](std::size_t t) {
        for (int i = 0; i < n; ++i) {
            series[(static_cast<std::size_t>(i) * t_star + (t - 1)) * 2] = pos[static_cast<std::size_t>(i)].x;
            series[(static_cast<std::size_t>(i) * t_star + (t - 1)) * 2 + 1] = pos[static_cast<std::size_t>(i)].y;
        }
    };
    // disp[t] is the step taken from t to t+1; intent[t] is its noise-free
    // component, the channel followers actually imitate.
    std::vector<detail::Vec2> disp(static_cast<std::size_t>(n) * t_star);
    std::vector<detail::Vec2> intent(static_cast<std::size_t>(n) * t_star);
    auto disp_at = [&](std::size_t t, int id) -> detail::Vec2& {
        return disp[(t - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(id - 1)];
    };
    auto intent_at = [&](std::size_t t, int id) -> detail::Vec2& {
        return intent[(t - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(id - 1)];
    };

    struct EntryState {
        detail::Vec2 target;
        double gait_period = 300.0;
        double gait_phase = 0.0;
        double heading_eps = 0.0;  // fast AR heading wiggle baked into the intent
        double course_eps = 0.0;   // slow course wander, also part of the intent
        std::vector<int> lag;      // response delay per id, drawn per interval
        detail::CascadeState cascade;
    };
    std::map<std::size_t, EntryState> states;  // by entry index

    // Per-interval response delay: alphas react in one step, erratics in
    // five, everyone else draws a fresh base of 2..4 (1..2 between the ranks
    // of a hierarchy chain) that wanders with the slow drift.
    auto lag_of = [&](const EntryState& st, int id) {
        const std::size_t i = static_cast<std::size_t>(id - 1);
        if (config.model == Model::HM) return st.lag[i];
        if (id <= 4) return detail::kAlphaLag[i];
        if (erratic[i]) return 4;
        return detail::clamp_lag(st.lag[i], lag_drift[i]);
    };

    auto centroid_of = [&](const std::vector<int>& ids) {
        detail::Vec2 c;
        for (int id : ids) c = c + pos[static_cast<std::size_t>(id - 1)];
        return c * (1.0 / static_cast<double>(ids.size()));
    };

    auto init_entry = [&](std::size_t e) {
        const auto& entry = truth.entries[e];
        // Entries opening at the same step head to spread-out targets.
        std::vector<std::size_t> cohort;
        for (std::size_t k = 0; k < truth.entries.size(); ++k)
            if (!truth.entries[k].stopped && truth.entries[k].t_begin == entry.t_begin)
                cohort.push_back(k);
        const double base = 2.0 * M_PI * uniform(rng);
        for (std::size_t c = 0; c < cohort.size(); ++c) {
            const auto& sib = truth.entries[cohort[c]];
            EntryState st;
            const double angle = base + 2.0 * M_PI * static_cast<double>(c) / static_cast<double>(cohort.size()) +
                                 0.15 * gauss(rng);
            const double duration = static_cast<double>(sib.t_end - sib.t_begin + 1);
            const double dist = mp.target_dist_factor * speed * duration;
            st.target = centroid_of(sib.members) + detail::Vec2{std::cos(angle), std::sin(angle)} * dist;
            st.gait_period = mp.gait_period_lo + (mp.gait_period_hi - mp.gait_period_lo) * uniform(rng);
            st.gait_phase = 2.0 * M_PI * uniform(rng);
            st.lag.assign(static_cast<std::size_t>(n), 2);
            if (config.model == Model::HM) {
                // One-step delays at the top ranks and at every fifth link;
                // the ranks in between respond in lockstep, so the chain's
                // total delay stays within the warping band.
                std::vector<int> order{sib.leader};
                for (int id : sib.members)
                    if (id != sib.leader) order.push_back(id);
                for (std::size_t pos = 1; pos < order.size(); ++pos) {
                    const bool delayed = pos <= 4;
                    st.lag[static_cast<std::size_t>(order[pos] - 1)] = delayed ? 1 : 0;
                }
            } else {
                for (int id : sib.members)
                    st.lag[static_cast<std::size_t>(id - 1)] = 2 + static_cast<int>(uniform(rng) * 2.0);
            }
            // Detachment draws: an erratic member may sit this interval out,
            // wandering off on its own straight heading instead. Bout edges
            // line up with the interval boundaries.
            if (noise_std > 0.0) {
                for (int id : sib.members) {
                    const std::size_t i = static_cast<std::size_t>(id - 1);
                    if (!erratic[i] || sib.t_begin < distraction[i].until) continue;
                    if (std::binary_search(sib.informed.begin(), sib.informed.end(), id)) continue;
                    if (uniform(rng) < mp.distract_prob) {
                        distraction[i].started = sib.t_begin;
                        distraction[i].until = sib.t_end;
                        const double a = 2.0 * M_PI * uniform(rng);
                        distraction[i].heading = {std::cos(a), std::sin(a)};
                    }
                }
            }
            if (config.model == Model::IC) {
                st.cascade.active.assign(static_cast<std::size_t>(n), 0);
                st.cascade.attempted.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
                st.cascade.active[static_cast<std::size_t>(sib.leader - 1)] = 1;
                for (int id : sib.members)
                    if (id != sib.leader && uniform(rng) < config.ic_rho)
                        st.cascade.active[static_cast<std::size_t>(id - 1)] = 1;
            }
            states[cohort[c]] = std::move(st);
        }
    };

    record(1);
    for (std::size_t t = 1; t < t_star; ++t) {
        if (drift_innovation > 0.0)
            for (auto& d : lag_drift) d = mp.lag_drift_ar * d + drift_innovation * gauss(rng);
        std::vector<std::size_t> active_entries;
        for (std::size_t e = 0; e < truth.entries.size(); ++e) {
            const auto& entry = truth.entries[e];
            if (entry.stopped || t < entry.t_begin || t > entry.t_end) continue;
            if (!states.count(e)) init_entry(e);
            active_entries.push_back(e);
        }

        for (std::size_t e : active_entries) {
            const auto& entry = truth.entries[e];
            EntryState& st = states[e];
            // Speed envelope: ease in, cruise, slow on approach; the led-stop
            // entries decay all the way to standstill instead.
            const double duration = static_cast<double>(entry.t_end - entry.t_begin + 1);
            double decay = std::min(1.0, static_cast<double>(t - entry.t_begin + 1) / mp.rampup_steps);
            if (entry.decelerate) {
                decay *= static_cast<double>(entry.t_end - t + 1) / duration;
            } else {
                const double tail = std::max(1.0, mp.approach_frac * duration);
                const double remaining = static_cast<double>(entry.t_end - t + 1);
                if (remaining < tail)
                    decay *= std::max(mp.approach_floor, remaining / tail);
            }
            const double gait = 1.0 + mp.gait_amp *
                std::sin(2.0 * M_PI * static_cast<double>(t - entry.t_begin) / st.gait_period + st.gait_phase);
            const int L = entry.leader;

            if (config.model == Model::CM) {
                std::normal_distribution<double> wiggle(0.0, mp.cm_wiggle_frac * noise_std);
                st.heading_eps = mp.cm_wiggle_ar * st.heading_eps + wiggle(rng);
                const detail::Vec2 dir = detail::rotate(
                    detail::unit_or_zero(st.target - centroid_of(entry.informed)), st.heading_eps);
                const detail::Vec2 informed_step = dir * (speed * gait * decay);
                for (int id : entry.members) {
                    const std::size_t i = static_cast<std::size_t>(id - 1);
                    const bool is_informed =
                        std::binary_search(entry.informed.begin(), entry.informed.end(), id);
                    if (is_informed) {
                        intent_at(t, id) = informed_step;
                        disp_at(t, id) = informed_step +
                            noise2(noise_std * mp.follower_noise_frac * temperament[i] * decay);
                    } else {
                        const int lag = lag_of(st, id);
                        detail::Vec2 align;
                        if (t > static_cast<std::size_t>(lag)) {
                            for (int m : entry.members) align = align + disp_at(t - static_cast<std::size_t>(lag), m);
                            align = align * (1.0 / static_cast<double>(entry.members.size()));
                        }
                        detail::Vec2 cohesion = centroid_of(entry.members) - pos[i];
                        const double cn = cohesion.norm();
                        if (cn > speed) cohesion = cohesion * (speed / cn);
                        const detail::Vec2 step = blend_if_distracted(
                            id, t, cohesion * mp.cm_cohesion_weight + align * (1.0 - mp.cm_cohesion_weight), decay);
                        intent_at(t, id) = step;
                        disp_at(t, id) = step +
                            noise2(noise_std * mp.follower_noise_frac * temperament[i] * decay *
                                   bout_noise_scale(id, t));
                    }
                }
                continue;
            }

            // Leader: pursue the entry target with a wandering heading. Both
            // the fast wiggle and the slow course wander are part of the
            // intent, so followers reproduce them.
            {
                std::normal_distribution<double> wiggle(0.0, mp.heading_wiggle_frac * noise_std);
                st.heading_eps = mp.heading_wiggle_ar * st.heading_eps + wiggle(rng);
                if (noise_std > 0.0) {
                    std::normal_distribution<double> course(
                        0.0, mp.course_drift_std * std::sqrt(1.0 - mp.course_drift_ar * mp.course_drift_ar));
                    st.course_eps = mp.course_drift_ar * st.course_eps + course(rng);
                }
                const detail::Vec2 dir = detail::rotate(
                    detail::unit_or_zero(st.target - pos[static_cast<std::size_t>(L - 1)]),
                    st.heading_eps + st.course_eps);
                intent_at(t, L) = dir * (speed * gait * decay);
                disp_at(t, L) = intent_at(t, L) +
                    noise2(noise_std * mp.leader_noise_frac * temperament[static_cast<std::size_t>(L - 1)] * decay);
            }

            if (config.model == Model::DM || config.model == Model::HM) {
                // Chain predecessor: the leader for DM, the previous member in
                // the leader-first ascending order for HM. Followers imitate
                // the predecessor's intended step, lagged by their own delay.
                std::vector<int> order{L};
                for (int id : entry.members)
                    if (id != L) order.push_back(id);
                for (std::size_t p = 1; p < order.size(); ++p) {
                    const int id = order[p];
                    int source = L;
                    if (config.model == Model::HM) {
                        // Nearest non-distracted individual up the line.
                        std::size_t q = p - 1;
                        while (q > 0 && distracted(order[q], t)) --q;
                        source = order[q];
                    }
                    const int lag = lag_of(st, id);
                    detail::Vec2 copied;
                    if (t > static_cast<std::size_t>(lag)) copied = intent_at(t - static_cast<std::size_t>(lag), source);
                    copied = blend_if_distracted(id, t, copied, decay);
                    intent_at(t, id) = copied;
                    disp_at(t, id) = copied +
                        noise2(noise_std * mp.follower_noise_frac * temperament[static_cast<std::size_t>(id - 1)] * decay *
                               bout_noise_scale(id, t));
                }
            } else {  // IC
                for (int id : entry.members) {
                    if (id == L) continue;
                    const std::size_t i = static_cast<std::size_t>(id - 1);
                    if (!st.cascade.active[i]) continue;  // inactive: stand still
                    const int lag = lag_of(st, id);
                    detail::Vec2 anchor = pos[static_cast<std::size_t>(L - 1)];
                    if (t > static_cast<std::size_t>(lag)) {
                        // Chase where the leader was lag steps ago.
                        anchor = {series[(static_cast<std::size_t>(L - 1) * t_star + (t - static_cast<std::size_t>(lag) - 1)) * 2],
                                  series[(static_cast<std::size_t>(L - 1) * t_star + (t - static_cast<std::size_t>(lag) - 1)) * 2 + 1]};
                    }
                    const detail::Vec2 delta = anchor - pos[i];
                    const double dist = delta.norm();
                    const double step = std::min(dist, mp.chase_speed_factor * speed * decay);
                    disp_at(t, id) = blend_if_distracted(id, t, detail::unit_or_zero(delta) * step, decay) +
                        noise2(noise_std * mp.follower_noise_frac * temperament[i] * decay * bout_noise_scale(id, t));
                }
                detail::ic_cascade_round(st.cascade, pos, entry.members, config.ic_k, config.ic_rho, rng);
            }
        }

        for (int id = 1; id <= n; ++id)
            pos[static_cast<std::size_t>(id - 1)] = pos[static_cast<std::size_t>(id - 1)] + disp_at(t, id);
        record(t + 1);
    }

    Dataset data;
    data.series.reserve(static_cast<std::size_t>(n));
    for (int id = 1; id <= n; ++id) {
        TimeSeries s;
        s.id = std::to_string(id);
        s.dim = 2;
        const auto begin = series.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(id - 1) * t_star * 2);
        s.values.assign(begin, begin + static_cast<std::ptrdiff_t>(t_star * 2));
        data.series.push_back(std::move(s));
    }
    data.validate();
    return {std::move(data), std::move(truth)};
}

}  // namespace mflica
