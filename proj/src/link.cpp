#include "qdq/link.hpp"

#include <charconv>
#include <cmath>

#include "qdq/error.hpp"
#include "qdq/noise.hpp"
#include "qdq/rng.hpp"

namespace qdq {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError("link config: " + message);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void LinkConfig::validate() const {
    require(p_gen >= 0.0 && p_gen <= 1.0, "p_gen must lie in [0, 1]");
    require(slot_duration > 0.0 && std::isfinite(slot_duration), "slot_duration must be positive");
    require(tau > 0.0 && std::isfinite(tau), "tau must be positive");
    require(f_init >= 0.25 && f_init <= 1.0, "f_init must lie in [1/4, 1]");
    require(f_min >= 0.25 && f_min <= f_init, "f_min must lie in [1/4, f_init]");
}

std::string_view to_string(LinkEventKind kind) {
    switch (kind) {
        case LinkEventKind::AttemptFail: return "attempt_fail";
        case LinkEventKind::HeraldSuccess: return "herald_success";
        case LinkEventKind::DiscardBelowThreshold: return "discard_below_threshold";
        case LinkEventKind::Deliver: return "deliver";
    }
    return "?";
}

LinkTrace run_link_simulation(const LinkConfig& cfg) {
    cfg.validate();
    LinkTrace trace;
    trace.config = cfg;
    Rng rng(cfg.seed);

    struct StoredPair {
        double fidelity;
        std::uint64_t age;
    };
    std::optional<StoredPair> stored;

    for (std::uint64_t slot = 0; slot < cfg.n_slots; ++slot) {
        if (!stored) {
            if (!rng.bernoulli(cfg.p_gen)) {
                trace.events.push_back({slot, LinkEventKind::AttemptFail, std::nullopt});
                continue;
            }
            trace.events.push_back({slot, LinkEventKind::HeraldSuccess, cfg.f_init});
            if (cfg.hold_slots == 0) trace.events.push_back({slot, LinkEventKind::Deliver, cfg.f_init});
            else stored = StoredPair{cfg.f_init, 0};
            continue;
        }
        stored->fidelity = decay_fidelity(stored->fidelity, cfg.slot_duration, cfg.tau);
        ++stored->age;
        if (stored->fidelity < cfg.f_min) {
            trace.events.push_back({slot, LinkEventKind::DiscardBelowThreshold, stored->fidelity});
            stored.reset();
        } else if (stored->age >= cfg.hold_slots) {
            trace.events.push_back({slot, LinkEventKind::Deliver, stored->fidelity});
            stored.reset();
        }
    }
    trace.stats = compute_link_stats(trace.events);
    return trace;
}

LinkStats compute_link_stats(const std::vector<LinkEvent>& events) {
    LinkStats stats;
    double delivered_fidelity = 0.0;
    std::uint64_t episode_attempts = 0;
    std::uint64_t attempts_to_success = 0;
    for (const auto& e : events) {
        switch (e.kind) {
            case LinkEventKind::AttemptFail:
                ++stats.attempts;
                ++episode_attempts;
                break;
            case LinkEventKind::HeraldSuccess:
                ++stats.attempts;
                ++stats.successes;
                attempts_to_success += episode_attempts + 1;
                episode_attempts = 0;
                break;
            case LinkEventKind::DiscardBelowThreshold:
                ++stats.discards;
                break;
            case LinkEventKind::Deliver:
                ++stats.deliveries;
                delivered_fidelity += e.fidelity.value_or(0.0);
                break;
        }
    }
    if (stats.deliveries > 0) stats.mean_fidelity_at_delivery = delivered_fidelity / static_cast<double>(stats.deliveries);
    if (stats.successes > 0) {
        stats.mean_slots_to_first_success = static_cast<double>(attempts_to_success) / static_cast<double>(stats.successes);
    }
    return stats;
}

double analytic_delivery_fidelity(const LinkConfig& cfg) {
    cfg.validate();
    return 0.25 + (cfg.f_init - 0.25) * std::exp(-static_cast<double>(cfg.hold_slots) * cfg.slot_duration / cfg.tau);
}

DensityMatrix materialize_pair(double fidelity) { return werner_from_fidelity(fidelity); }

// --- Serialization ---

nlohmann::json to_json(const LinkConfig& cfg) {
    return {{"p_gen", cfg.p_gen},         {"slot_duration", cfg.slot_duration},
            {"tau", cfg.tau},             {"f_init", cfg.f_init},
            {"f_min", cfg.f_min},         {"hold_slots", cfg.hold_slots},
            {"n_slots", cfg.n_slots},     {"seed", cfg.seed}};
}

LinkConfig link_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("link config must be a JSON object");
    auto number = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("link config: missing number '") + key + "'");
        return j.at(key).get<double>();
    };
    auto count = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
            throw DomainError(std::string("link config: '") + key + "' must be a nonnegative integer");
        }
        return j.at(key).get<std::uint64_t>();
    };
    LinkConfig cfg;
    cfg.p_gen = number("p_gen");
    cfg.slot_duration = number("slot_duration");
    cfg.tau = number("tau");
    cfg.f_init = number("f_init");
    cfg.f_min = number("f_min");
    cfg.hold_slots = count("hold_slots");
    cfg.n_slots = count("n_slots");
    cfg.seed = j.contains("seed") ? count("seed") : kDefaultSeed;
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const LinkStats& stats) {
    return {{"attempts", stats.attempts},
            {"successes", stats.successes},
            {"deliveries", stats.deliveries},
            {"discards", stats.discards},
            {"mean_fidelity_at_delivery", optional_number(stats.mean_fidelity_at_delivery)},
            {"mean_slots_to_first_success", optional_number(stats.mean_slots_to_first_success)}};
}

nlohmann::json to_json(const LinkTrace& trace) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : trace.events) {
        events.push_back({{"slot", e.slot}, {"kind", std::string(to_string(e.kind))}, {"fidelity", optional_number(e.fidelity)}});
    }
    return {{"config", to_json(trace.config)}, {"events", std::move(events)}, {"stats", to_json(trace.stats)}};
}

std::string stats_csv(const LinkStats& stats) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    return "attempts,successes,deliveries,discards,mean_fidelity_at_delivery,mean_slots_to_first_success\n" +
           std::to_string(stats.attempts) + "," + std::to_string(stats.successes) + "," +
           std::to_string(stats.deliveries) + "," + std::to_string(stats.discards) + "," +
           opt(stats.mean_fidelity_at_delivery) + "," + opt(stats.mean_slots_to_first_success) + "\n";
}

}  // namespace qdq
