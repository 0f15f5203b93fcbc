#pragma once

// Random limit-order book on a window of price slots that follows the price.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/model.hpp"
#include "fracvol/random.hpp"

namespace fracvol::lob {

struct BookState {
    long price_slot = 0;
    double slot_size = 0.1;
    long half_width = 10;
    std::map<long, double> asks;
    std::map<long, double> bids;
    double pending_buys = 0.0;
    double pending_sells = 0.0;

    long lo() const { return price_slot - half_width; }
    long hi() const { return price_slot + half_width; }

    /// Window, positivity and register invariants.
    bool valid() const {
        auto ok = [&](const std::map<long, double>& side) {
            for (const auto& [slot, size] : side)
                if (slot < lo() || slot > hi() || !(size > 0.0)) return false;
            return true;
        };
        return ok(asks) && ok(bids) && pending_buys >= 0.0 && pending_sells >= 0.0;
    }

    friend bool operator==(const BookState&, const BookState&) = default;
};

enum class EventType { limit_ask, limit_bid, market_buy, market_sell };

inline std::string_view to_string(EventType e) {
    switch (e) {
        case EventType::limit_ask: return "limit_ask";
        case EventType::limit_bid: return "limit_bid";
        case EventType::market_buy: return "market_buy";
        case EventType::market_sell: return "market_sell";
    }
    return "unknown";
}

struct Event {
    EventType type = EventType::market_buy;
    long slot = 0;  // arrival slot for limit orders; ignored for market orders
};

enum class Placement {
    literal,     // asks and bids anywhere in [p−w, p+w]
    sides_only,  // asks in [p+1, p+w], bids in [p−w, p−1]
};

struct LobParams {
    long half_width = 10;
    double order_size = 2.0;
    std::array<double, 4> event_probs{0.25, 0.25, 0.25, 0.25};  // limit ask, limit bid, market buy, market sell
    std::size_t steps = 1 << 17;
    std::uint64_t seed = 1;
    double slot_size = 0.1;
    double initial_price = 1000.0;
    Placement placement = Placement::literal;
    std::optional<std::size_t> burn_in;  // default 10·(2w+1)

    std::size_t burn_in_steps() const {
        return burn_in ? *burn_in : static_cast<std::size_t>(10 * (2 * half_width + 1));
    }

    void validate() const {
        detail::require(half_width >= 1, "LobParams: half_width must be at least 1");
        detail::require(order_size > 0.0, "LobParams: order_size must be positive");
        detail::require(slot_size > 0.0, "LobParams: slot_size must be positive");
        detail::require(initial_price > 0.0, "LobParams: initial_price must be positive");
        double total = 0.0;
        for (double p : event_probs) {
            detail::require(p >= 0.0, "LobParams: event probabilities must be non-negative");
            total += p;
        }
        detail::require(std::abs(total - 1.0) < 1e-9, "LobParams: event probabilities must sum to 1");
    }
};

inline BookState empty_book(const LobParams& p) {
    BookState b;
    b.slot_size = p.slot_size;
    b.half_width = p.half_width;
    b.price_slot = std::lround(p.initial_price / p.slot_size);
    return b;
}

namespace detail {

inline void prune(BookState& b) {
    auto cut = [&](std::map<long, double>& side) {
        side.erase(side.begin(), side.lower_bound(b.lo()));
        side.erase(side.upper_bound(b.hi()), side.end());
    };
    cut(b.asks);
    cut(b.bids);
}

/// Closest non-empty slot to `p`; equidistant slots resolve to the lower one
/// when prefer_lower, else the higher.
inline std::map<long, double>::iterator closest(std::map<long, double>& side, long p, bool prefer_lower) {
    if (side.empty()) return side.end();
    auto up = side.lower_bound(p);
    if (up == side.end()) return std::prev(up);
    if (up->first == p || up == side.begin()) return up;
    auto down = std::prev(up);
    const long du = up->first - p, dd = p - down->first;
    if (dd < du) return down;
    if (du < dd) return up;
    return prefer_lower ? down : up;
}

inline void market_order(BookState& b, std::map<long, double>& side, double& pending, bool buy) {
    double remaining = 1.0;
    bool traded = false;
    while (remaining > 0.0) {
        auto it = closest(side, b.price_slot, buy);
        if (it == side.end()) break;
        const double fill = std::min(remaining, it->second);
        remaining -= fill;
        it->second -= fill;
        b.price_slot = it->first;
        traded = true;
        if (it->second <= 0.0) side.erase(it);
    }
    if (remaining > 0.0) pending += remaining;
    if (traded) prune(b);
}

inline void limit_order(BookState& b, std::map<long, double>& side, double& opposing_pending, long slot, double size) {
    if (opposing_pending > 0.0) {
        const double matched = std::min(size, opposing_pending);
        opposing_pending -= matched;
        size -= matched;
        b.price_slot = slot;
        prune(b);
    }
    if (size > 0.0 && slot >= b.lo() && slot <= b.hi()) side[slot] += size;
}

}  // namespace detail

/// Applies one event to the book. Limit orders first fill the opposing pending
/// register (the price moves to the arrival slot); market orders of unit size
/// walk outward from the current price; any unfilled remainder is registered.
inline void apply_event(BookState& b, const LobParams& p, const Event& e) {
    switch (e.type) {
        case EventType::limit_ask:
            detail::limit_order(b, b.asks, b.pending_buys, e.slot, p.order_size);
            break;
        case EventType::limit_bid:
            detail::limit_order(b, b.bids, b.pending_sells, e.slot, p.order_size);
            break;
        case EventType::market_buy:
            detail::market_order(b, b.asks, b.pending_buys, true);
            break;
        case EventType::market_sell:
            detail::market_order(b, b.bids, b.pending_sells, false);
            break;
    }
}

/// Draws one event (type by event_probs, limit slot uniform over the placement range).
inline Event draw_event(const BookState& b, const LobParams& p, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    Event e;
    double acc = 0.0;
    e.type = EventType::market_sell;
    for (int i = 0; i < 4; ++i) {
        acc += p.event_probs[static_cast<std::size_t>(i)];
        if (u < acc) {
            e.type = static_cast<EventType>(i);
            break;
        }
    }
    if (e.type == EventType::limit_ask || e.type == EventType::limit_bid) {
        long lo = b.lo(), hi = b.hi();
        if (p.placement == Placement::sides_only) {
            if (e.type == EventType::limit_ask) lo = b.price_slot + 1;
            else hi = b.price_slot - 1;
        }
        std::uniform_int_distribution<long> slot(lo, hi);
        e.slot = slot(rng);
    } else {
        e.slot = b.price_slot;
    }
    return e;
}

inline Event lob_step(BookState& b, const LobParams& p, Rng& rng) {
    const Event e = draw_event(b, p, rng);
    apply_event(b, p, e);
    return e;
}

struct TraceRow {
    std::size_t step = 0;
    EventType event = EventType::market_buy;
    long slot = 0;  // arrival slot (limit) or resulting price slot (market)
    double price = 0.0;
};

struct LobRun {
    MarketPath path;
    BookState final_book;
    std::vector<TraceRow> trace;
};

/// Runs burn-in plus `steps` events from an empty book. The recorded path
/// starts after burn-in at the initial price, p_t = p₀ + (slot_t − slot₀)·Δp.
inline LobRun run_lob(const LobParams& p, bool with_trace = false) {
    p.validate();
    if (p.steps < 1) throw ParameterError("run_lob: steps must be at least 1");
    LobRun run;
    BookState b = empty_book(p);
    Rng rng = make_rng(p.seed, streams::book);
    const std::size_t burn = p.burn_in_steps();
    for (std::size_t i = 0; i < burn; ++i) lob_step(b, p, rng);

    const long slot0 = b.price_slot;
    auto price_of = [&](long slot) { return p.initial_price + static_cast<double>(slot - slot0) * p.slot_size; };
    run.path.seed = p.seed;
    run.path.times.reserve(p.steps + 1);
    run.path.prices.reserve(p.steps + 1);
    run.path.times.push_back(0.0);
    run.path.prices.push_back(p.initial_price);
    for (std::size_t t = 1; t <= p.steps; ++t) {
        const Event e = lob_step(b, p, rng);
        const double price = price_of(b.price_slot);
        if (!(price > 0.0)) throw Error("run_lob: price left the positive range; raise initial_price");
        run.path.times.push_back(static_cast<double>(t));
        run.path.prices.push_back(price);
        if (with_trace) {
            const bool limit = e.type == EventType::limit_ask || e.type == EventType::limit_bid;
            run.trace.push_back({t, e.type, limit ? e.slot : b.price_slot, price});
        }
    }
    run.final_book = std::move(b);
    return run;
}

}  // namespace fracvol::lob
