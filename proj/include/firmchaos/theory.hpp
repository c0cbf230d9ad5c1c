#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace firmchaos {

/// The eight theories of the firm, each tracked as its own channel.
enum class Theory {
    classical_organization,
    neoclassical_organization,
    transaction_cost,
    managerial,
    principal_agent,
    behavioural,
    evolutionary,
    environment,
};

inline constexpr std::size_t kTheoryCount = 8;

inline constexpr std::array<Theory, kTheoryCount> kTheories{
    Theory::classical_organization, Theory::neoclassical_organization, Theory::transaction_cost,
    Theory::managerial,             Theory::principal_agent,           Theory::behavioural,
    Theory::evolutionary,           Theory::environment};

inline constexpr std::array<std::string_view, kTheoryCount> kTheoryLabels{
    "classical_organization", "neoclassical_organization", "transaction_cost", "managerial",
    "principal_agent",        "behavioural",               "evolutionary",     "environment"};

constexpr std::size_t index_of(Theory t) noexcept { return static_cast<std::size_t>(t); }

constexpr std::string_view to_string(Theory t) noexcept { return kTheoryLabels[index_of(t)]; }

constexpr std::optional<Theory> parse_theory(std::string_view label) noexcept {
    for (std::size_t i = 0; i < kTheoryCount; ++i) {
        if (kTheoryLabels[i] == label) return kTheories[i];
    }
    return std::nullopt;
}

}  // namespace firmchaos
