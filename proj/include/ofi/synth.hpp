// synth.hpp: ground-truth generators: a stylized depth-D order book that
// emits Level-1 quote/trade records with exact event labels, and an i.i.d.
// event-flow generator for the OFI/volume scaling limit.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ofi/ks.hpp"
#include "ofi/types.hpp"

namespace ofi {

/// Mid-price change in ticks of the stylized book:
///   ceil((Lb - Cb - Ms) / D) / 2 - ceil((Ls - Cs - Mb) / D) / 2.
double stylized_delta_p(Shares limit_buy, Shares cancel_buy, Shares market_sell, Shares limit_sell,
                        Shares cancel_sell, Shares market_buy, Shares depth);

enum class EventType { market_sell, market_buy, limit_buy, limit_sell, cancel_buy, cancel_sell };

const char* event_type_code(EventType t);

/// Relative event-type weights. Symmetric across sides, so the mid is a
/// martingale; limit orders slightly outweigh removals, which keeps the
/// spread from drifting wide over a session.
struct EventMix {
    double market_sell = 0.1;
    double market_buy = 0.1;
    double limit_buy = 0.3;
    double limit_sell = 0.3;
    double cancel_buy = 0.1;
    double cancel_sell = 0.1;
};

struct SizeDistribution {
    enum class Kind { constant, uniform, geometric };
    Kind kind = Kind::uniform;
    /// constant: lo; uniform: integers in [lo, hi]; geometric: mean `mean`,
    /// support 1, 2, ...
    Shares lo = 1;
    Shares hi = 100;
    double mean = 50.0;

    Shares sample(std::mt19937_64& rng) const;
};

struct SynthParams {
    Shares depth = 100;
    double tick_size = 0.01;
    double initial_mid = 100.005;
    int initial_spread_ticks = 1;
    /// Events per second.
    double event_rate = 5.0;
    EventMix mix;
    SizeDistribution sizes;
    /// Chance that a limit order opens a new level one tick inside a spread
    /// of two or more ticks instead of joining the queue.
    double improvement_probability = 0.0;
    /// Seconds after the session open; at most one session.
    double horizon = 23400.0;
    std::uint64_t seed = 1;
    TradingDay day = 20100401;
    std::string exchange = "S";
    TimeGrid grid;

    /// Throws ArgumentError on invalid parameters.
    void validate() const;
};

struct GroundTruthRow {
    std::uint64_t seq = 0;
    std::uint64_t event_id = 0;
    EventType type = EventType::limit_buy;
    Shares e = 0;
    Seconds timestamp = 0;
    /// -1 when the record is not inside any grid bucket.
    std::int64_t bucket = -1;
};

struct BucketFlows {
    Shares limit_buy = 0;
    Shares cancel_buy = 0;
    Shares market_sell = 0;
    Shares limit_sell = 0;
    Shares cancel_sell = 0;
    Shares market_buy = 0;

    Shares ofi() const {
        return limit_buy - cancel_buy - market_sell - limit_sell + cancel_sell + market_buy;
    }
};

struct GroundTruth {
    /// One row per emitted quote record after the opening one. An order that
    /// spills over a level boundary produces one row per level touched, all
    /// sharing its event_id.
    std::vector<GroundTruthRow> rows;
    std::vector<BucketFlows> buckets;
    /// Mid change in ticks per bucket, read off the book state.
    std::vector<double> bucket_dp;
    std::size_t events = 0;
};

struct SimulationOutput {
    std::vector<RawQuote> quotes;
    std::vector<RawTrade> trades;
    GroundTruth truth;
};

/// Event-by-event driver of the stylized book, for callers that need to
/// script the order sequence.
class StylizedBook {
public:
    explicit StylizedBook(SynthParams params);

    /// Emits the opening record (both queues at D). Called implicitly by the
    /// first apply().
    void open(Seconds timestamp);
    /// Applies one order. `improve` asks a limit order to open a new level
    /// inside the spread; its size is then capped at D.
    void apply(EventType type, Shares size, Seconds timestamp, bool improve = false);

    Price bid_price() const { return Price{bid_.price}; }
    Price ask_price() const { return Price{ask_.price}; }
    Shares bid_size() const { return bid_.queue; }
    Shares ask_size() const { return ask_.queue; }
    std::int64_t spread_ticks() const { return spread() / tick_; }
    const std::vector<RawQuote>& quotes() const { return out_.quotes; }
    const std::vector<RawTrade>& trades() const { return out_.trades; }
    const GroundTruth& truth() const { return out_.truth; }

    /// Fills in the per-bucket mid changes and hands over the output.
    SimulationOutput finish() &&;

private:
    struct Queue {
        std::int64_t price = 0;
        Shares queue = 0;
        std::int64_t away = 0;  // price step when the queue empties
    };

    /// Removes up to `amount` from one level of `q`; returns the size taken.
    Shares remove_piece(Queue& q, Shares amount, EventType type, bool execution, Seconds ts);
    void add(Queue& own, Queue& other, Shares amount, EventType limit_type, EventType cross_type, bool improve,
             Seconds ts);
    void emit(EventType type, Shares e, Seconds ts);
    std::int64_t spread() const { return ask_.price - bid_.price; }

    SynthParams params_;
    std::int64_t tick_ = 0;
    Queue bid_;
    Queue ask_;
    bool opened_ = false;
    std::uint64_t next_seq_ = 0;
    std::uint64_t event_id_ = 0;
    SimulationOutput out_;
};

/// Simulates one session of the stylized book. Queues start at D and never
/// exceed D: additions beyond D open a new level one tick inside the spread,
/// or, when the spread is one tick, execute against the opposite queue (and
/// are labelled as market orders). Removals that empty a queue move that
/// side one tick away and refill it to D. Every state change is one quote
/// record; every execution is one trade record. Nothing is emitted when no
/// event arrives within the horizon. Deterministic in the seed.
SimulationOutput simulate_stylized_book(const SynthParams& params);

/// `seq,type,e,bucket`
void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth);

enum class ContributionDistribution { gaussian, rademacher, uniform };
/// geometric: support 1, 2, ... with mean mu.
enum class TradeSizeDistribution { constant, geometric };

struct ScalingParams {
    double event_rate = 10.0;        // Lambda, events per second
    double trade_fraction = 0.2;     // pi
    double mean_trade_size = 100.0;  // mu
    double contribution_sd = 100.0;  // sigma
    ContributionDistribution contributions = ContributionDistribution::gaussian;
    TradeSizeDistribution trade_sizes = TradeSizeDistribution::geometric;

    void validate() const;
};

struct IidFlow {
    std::vector<BookEvent> events;
    /// Trades carry the sign of their event's contribution and an
    /// independent size; matched_quote_seq is the event's seq.
    std::vector<SignedTrade> trades;
};

/// Poisson(Lambda) arrivals over [0, horizon) seconds, stamped as
/// start + floor(t). Contributions are i.i.d. with standard deviation sigma;
/// each event independently carries a trade with probability pi.
IidFlow generate_iid_flow(const ScalingParams& scaling, double horizon, std::uint64_t seed,
                          Seconds start = kSessionOpen, TradingDay day = 0);

struct CltCheckResult {
    KsResult ks;
    std::vector<double> ratios;
    /// Replications drawn again because VOL(T) was zero.
    std::size_t redraws = 0;
};

/// Draws `replications` (at least 100) independent flows over [0, horizon) and tests
/// sqrt(mu pi) / sigma * OFI(T) / sqrt(VOL(T)) against N(0, 1).
CltCheckResult clt_check(std::size_t replications, const ScalingParams& scaling, double horizon,
                                  std::uint64_t seed);

}  // namespace ofi
