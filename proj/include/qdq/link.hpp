#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdq/state.hpp"

namespace qdq {

/// Parameters of one heralded entanglement link with a single quantum memory.
struct LinkConfig {
    double p_gen = 0.0;          // herald success probability per attempt
    double slot_duration = 1.0;  // time per slot
    double tau = 0.0;            // memory decay constant; no default
    double f_init = 1.0;         // fidelity of a freshly heralded pair
    double f_min = 0.25;         // discard threshold (strict <)
    std::uint64_t hold_slots = 0;
    std::uint64_t n_slots = 0;
    std::uint64_t seed = 0;

    /// Throws DomainError on any range violation.
    void validate() const;
};

enum class LinkEventKind { AttemptFail, HeraldSuccess, DiscardBelowThreshold, Deliver };

std::string_view to_string(LinkEventKind kind);

struct LinkEvent {
    std::uint64_t slot = 0;
    LinkEventKind kind = LinkEventKind::AttemptFail;
    std::optional<double> fidelity;  // absent for failed attempts

    friend bool operator==(const LinkEvent&, const LinkEvent&) = default;
};

struct LinkStats {
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t discards = 0;
    std::optional<double> mean_fidelity_at_delivery;
    /// Mean attempts per generation episode that ended in a herald.
    std::optional<double> mean_slots_to_first_success;

    friend bool operator==(const LinkStats&, const LinkStats&) = default;
};

struct LinkTrace {
    LinkConfig config;
    std::vector<LinkEvent> events;
    LinkStats stats;
};

/**
 * Slot-by-slot simulation.
 *
 * Without a stored pair a slot is one generation attempt that heralds with
 * probability p_gen; a new pair has fidelity f_init and, if hold_slots is 0,
 * is delivered in the same slot. While a pair is stored, each later slot
 * applies one decay step (delta_t = slot_duration), discards the pair if its
 * fidelity fell below f_min, and otherwise delivers it once it has been held
 * for hold_slots slots. Generation resumes in the next slot.
 */
LinkTrace run_link_simulation(const LinkConfig& cfg);

/// Statistics recomputed from an event list alone.
LinkStats compute_link_stats(const std::vector<LinkEvent>& events);

/// 1/4 + (f_init - 1/4) exp(-hold_slots * slot_duration / tau).
double analytic_delivery_fidelity(const LinkConfig& cfg);

/// Werner pair with the given fidelity.
DensityMatrix materialize_pair(double fidelity);

nlohmann::json to_json(const LinkConfig& cfg);
/// Reads a config object; every field except seed is required.
LinkConfig link_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LinkStats& stats);
nlohmann::json to_json(const LinkTrace& trace);

/// Header line plus one data row.
std::string stats_csv(const LinkStats& stats);

}  // namespace qdq
