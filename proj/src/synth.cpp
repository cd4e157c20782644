#include "ofi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ofi/errors.hpp"

namespace ofi {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    // b > 0
    const std::int64_t q = a / b;
    return (a % b != 0 && a > 0) ? q + 1 : q;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_bid_side(EventType t) {
    return t == EventType::market_sell || t == EventType::limit_buy || t == EventType::cancel_buy;
}

}  // namespace

double stylized_delta_p(Shares limit_buy, Shares cancel_buy, Shares market_sell, Shares limit_sell,
                        Shares cancel_sell, Shares market_buy, Shares depth) {
    if (depth <= 0) {
        throw ArgumentError("depth must be positive");
    }
    const std::int64_t bid = ceil_div(limit_buy - cancel_buy - market_sell, depth);
    const std::int64_t ask = ceil_div(limit_sell - cancel_sell - market_buy, depth);
    return 0.5 * static_cast<double>(bid) - 0.5 * static_cast<double>(ask);
}

const char* event_type_code(EventType t) {
    switch (t) {
        case EventType::market_sell:
            return "Ms";
        case EventType::market_buy:
            return "Mb";
        case EventType::limit_buy:
            return "Lb";
        case EventType::limit_sell:
            return "Ls";
        case EventType::cancel_buy:
            return "Cb";
        case EventType::cancel_sell:
            return "Cs";
    }
    return "?";
}

Shares SizeDistribution::sample(std::mt19937_64& rng) const {
    switch (kind) {
        case Kind::constant:
            return lo;
        case Kind::uniform:
            return std::uniform_int_distribution<Shares>(lo, hi)(rng);
        case Kind::geometric:
            return 1 + std::geometric_distribution<Shares>(1.0 / mean)(rng);
    }
    return lo;
}

void SynthParams::validate() const {
    if (depth <= 0) {
        throw ArgumentError("depth D must be positive");
    }
    if (!(tick_size > 0.0) || !(event_rate > 0.0)) {
        throw ArgumentError("tick size and event rate must be positive");
    }
    if (initial_spread_ticks < 1) {
        throw ArgumentError("initial spread must be at least one tick");
    }
    const double probs[] = {mix.market_sell, mix.market_buy, mix.limit_buy,
                            mix.limit_sell,  mix.cancel_buy, mix.cancel_sell};
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw ArgumentError("event mix probabilities must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ArgumentError("event mix probabilities must sum to 1");
    }
    switch (sizes.kind) {
        case SizeDistribution::Kind::constant:
            if (sizes.lo < 1) {
                throw ArgumentError("constant order size must be positive");
            }
            break;
        case SizeDistribution::Kind::uniform:
            if (sizes.lo < 1 || sizes.hi < sizes.lo) {
                throw ArgumentError("uniform order sizes need 1 <= lo <= hi");
            }
            break;
        case SizeDistribution::Kind::geometric:
            if (!(sizes.mean >= 1.0)) {
                throw ArgumentError("geometric order size mean must be at least 1");
            }
            break;
    }
    if (!(improvement_probability >= 0.0 && improvement_probability <= 1.0)) {
        throw ArgumentError("improvement probability must lie in [0, 1]");
    }
    grid.validate();
    if (!(horizon >= 0.0) || horizon > static_cast<double>(grid.session_end - grid.session_start)) {
        throw ArgumentError("horizon must lie within one session");
    }
    const double bid = initial_mid - 0.5 * initial_spread_ticks * tick_size;
    if (!(bid > 0.0)) {
        throw ArgumentError("initial bid must be positive");
    }
}

StylizedBook::StylizedBook(SynthParams params) : params_(std::move(params)) {
    params_.validate();
    tick_ = std::llround(params_.tick_size * static_cast<double>(Price::kScale));
    const double bid_ticks = std::round((params_.initial_mid - 0.5 * params_.initial_spread_ticks * params_.tick_size) /
                                        params_.tick_size);
    bid_ = Queue{static_cast<std::int64_t>(bid_ticks) * tick_, params_.depth, -tick_};
    ask_ = Queue{bid_.price + params_.initial_spread_ticks * tick_, params_.depth, tick_};
    out_.truth.buckets.assign(params_.grid.bucket_count(), BucketFlows{});
}

void StylizedBook::open(Seconds timestamp) {
    if (opened_) {
        return;
    }
    opened_ = true;
    out_.quotes.push_back(RawQuote{params_.day, timestamp, next_seq_++, params_.exchange, Price{bid_.price},
                                   bid_.queue, Price{ask_.price}, ask_.queue, 0});
}

void StylizedBook::emit(EventType type, Shares e, Seconds ts) {
    const std::uint64_t seq = next_seq_++;
    out_.quotes.push_back(RawQuote{params_.day, ts, seq, params_.exchange, Price{bid_.price}, bid_.queue,
                                   Price{ask_.price}, ask_.queue, 0});
    GroundTruthRow row{seq, event_id_, type, e, ts, -1};
    if (auto k = params_.grid.bucket_of(ts)) {
        row.bucket = static_cast<std::int64_t>(*k);
        auto& f = out_.truth.buckets[*k];
        const Shares size = e < 0 ? -e : e;
        switch (type) {
            case EventType::market_sell:
                f.market_sell += size;
                break;
            case EventType::market_buy:
                f.market_buy += size;
                break;
            case EventType::limit_buy:
                f.limit_buy += size;
                break;
            case EventType::limit_sell:
                f.limit_sell += size;
                break;
            case EventType::cancel_buy:
                f.cancel_buy += size;
                break;
            case EventType::cancel_sell:
                f.cancel_sell += size;
                break;
        }
    }
    out_.truth.rows.push_back(row);
}

Shares StylizedBook::remove_piece(Queue& q, Shares amount, EventType type, bool execution, Seconds ts) {
    const Shares take = std::min(amount, q.queue);
    if (execution) {
        out_.trades.push_back(RawTrade{params_.day, ts, out_.trades.size(), params_.exchange, Price{q.price}, take, 0, ""});
    }
    q.queue -= take;
    if (q.queue == 0) {
        q.price += q.away;
        q.queue = params_.depth;
    }
    emit(type, &q == &bid_ ? -take : take, ts);
    return take;
}

void StylizedBook::add(Queue& own, Queue& other, Shares amount, EventType limit_type, EventType cross_type,
                       bool improve, Seconds ts) {
    const Shares sign = &own == &bid_ ? 1 : -1;
    if (improve && spread() >= 2 * tick_) {
        own.price -= own.away;
        own.queue = std::min(amount, params_.depth);
        emit(limit_type, sign * own.queue, ts);
        return;
    }
    while (amount > 0) {
        const Shares room = params_.depth - own.queue;
        if (room > 0) {
            const Shares added = std::min(amount, room);
            own.queue += added;
            amount -= added;
            emit(limit_type, sign * added, ts);
        } else if (spread() >= 2 * tick_) {
            own.price -= own.away;
            own.queue = std::min(amount, params_.depth);
            amount -= own.queue;
            emit(limit_type, sign * own.queue, ts);
        } else {
            amount -= remove_piece(other, amount, cross_type, true, ts);
        }
    }
}

void StylizedBook::apply(EventType type, Shares size, Seconds timestamp, bool improve) {
    if (size <= 0) {
        throw ArgumentError("order size must be positive");
    }
    open(timestamp);
    ++event_id_;
    ++out_.truth.events;
    Queue& own = is_bid_side(type) ? bid_ : ask_;
    Queue& other = is_bid_side(type) ? ask_ : bid_;
    switch (type) {
        case EventType::market_sell:
        case EventType::market_buy:
        case EventType::cancel_buy:
        case EventType::cancel_sell: {
            const bool execution = type == EventType::market_sell || type == EventType::market_buy;
            Shares left = size;
            while (left > 0) {
                left -= remove_piece(own, left, type, execution, timestamp);
            }
            break;
        }
        case EventType::limit_buy:
            add(own, other, size, type, EventType::market_buy, improve, timestamp);
            break;
        case EventType::limit_sell:
            add(own, other, size, type, EventType::market_sell, improve, timestamp);
            break;
    }
}

SimulationOutput StylizedBook::finish() && {
    const TimeGrid& grid = params_.grid;
    const std::size_t buckets = grid.bucket_count();
    auto& dp = out_.truth.bucket_dp;
    dp.assign(buckets, std::numeric_limits<double>::quiet_NaN());
    if (!out_.quotes.empty()) {
        // Bid+ask raw sum prevailing at each grid point.
        std::vector<std::optional<std::int64_t>> level(buckets + 1);
        std::optional<std::int64_t> current;
        std::size_t k = 0;
        for (const auto& q : out_.quotes) {
            while (k <= buckets && q.timestamp > grid.grid_point(k)) {
                level[k++] = current;
            }
            current = q.bid_price.raw + q.ask_price.raw;
        }
        while (k <= buckets) {
            level[k++] = current;
        }
        for (std::size_t j = 0; j < buckets; ++j) {
            if (level[j] && level[j + 1]) {
                dp[j] = static_cast<double>(*level[j + 1] - *level[j]) / static_cast<double>(2 * tick_);
            }
        }
    }
    return std::move(out_);
}

SimulationOutput simulate_stylized_book(const SynthParams& params) {
    StylizedBook book(params);
    std::mt19937_64 rng(params.seed);
    std::exponential_distribution<double> gap(params.event_rate);
    std::discrete_distribution<int> pick({params.mix.market_sell, params.mix.market_buy, params.mix.limit_buy,
                                          params.mix.limit_sell, params.mix.cancel_buy, params.mix.cancel_sell});
    std::bernoulli_distribution improve(params.improvement_probability);
    constexpr EventType kTypes[] = {EventType::market_sell, EventType::market_buy, EventType::limit_buy,
                                    EventType::limit_sell,  EventType::cancel_buy, EventType::cancel_sell};
    const Seconds start = params.grid.session_start;
    double t = 0.0;
    while (true) {
        t += gap(rng);
        if (t >= params.horizon) {
            break;
        }
        const Seconds ts = start + static_cast<Seconds>(std::floor(t));
        const EventType type = kTypes[pick(rng)];
        const Shares size = params.sizes.sample(rng);
        const bool limit = type == EventType::limit_buy || type == EventType::limit_sell;
        const bool inside = limit && improve(rng);
        if (book.quotes().empty()) {
            book.open(start);
        }
        book.apply(type, size, ts, inside);
    }
    return std::move(book).finish();
}

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth) {
    out << "seq,type,e,bucket\n";
    for (const auto& r : truth.rows) {
        out << r.seq << ',' << event_type_code(r.type) << ',' << r.e << ',';
        if (r.bucket >= 0) {
            out << r.bucket;
        }
        out << '\n';
    }
}

void ScalingParams::validate() const {
    if (!(event_rate > 0.0)) {
        throw ArgumentError("event rate must be positive");
    }
    if (!(trade_fraction > 0.0 && trade_fraction <= 1.0)) {
        throw ArgumentError("trade fraction must lie in (0, 1]");
    }
    if (!(mean_trade_size > 0.0)) {
        throw ArgumentError("mean trade size must be positive");
    }
    if (!(contribution_sd > 0.0)) {
        throw ArgumentError("contribution standard deviation must be positive");
    }
    if (trade_sizes == TradeSizeDistribution::geometric && mean_trade_size < 1.0) {
        throw ArgumentError("geometric trade sizes need a mean of at least one share");
    }
    if (trade_sizes == TradeSizeDistribution::constant &&
        mean_trade_size != std::round(mean_trade_size)) {
        throw ArgumentError("constant trade size must be a whole number of shares");
    }
}

IidFlow generate_iid_flow(const ScalingParams& scaling, double horizon, std::uint64_t seed, Seconds start,
                          TradingDay day) {
    scaling.validate();
    if (!(horizon >= 0.0)) {
        throw ArgumentError("horizon must be non-negative");
    }
    IidFlow flow;
    flow.events.reserve(static_cast<std::size_t>(scaling.event_rate * horizon * 1.1) + 16);
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> gap(scaling.event_rate);
    std::normal_distribution<double> gauss(0.0, scaling.contribution_sd);
    std::bernoulli_distribution coin(0.5);
    const double half_width = scaling.contribution_sd * std::sqrt(3.0);
    std::uniform_real_distribution<double> flat(-half_width, half_width);
    std::bernoulli_distribution is_trade(scaling.trade_fraction);
    std::geometric_distribution<Shares> extra(1.0 / std::max(1.0, scaling.mean_trade_size));

    double t = 0.0;
    std::size_t n = 0;
    while (true) {
        t += gap(rng);
        if (t >= horizon) {
            break;
        }
        BookEvent ev;
        ev.n = ++n;
        ev.day = day;
        ev.timestamp = start + static_cast<Seconds>(std::floor(t));
        ev.seq = n;
        switch (scaling.contributions) {
            case ContributionDistribution::gaussian:
                ev.e = gauss(rng);
                break;
            case ContributionDistribution::rademacher:
                ev.e = coin(rng) ? scaling.contribution_sd : -scaling.contribution_sd;
                break;
            case ContributionDistribution::uniform:
                ev.e = flat(rng);
                break;
        }
        if (is_trade(rng)) {
            SignedTrade st;
            st.trade.day = day;
            st.trade.timestamp = ev.timestamp;
            st.trade.seq = n;
            st.trade.size = scaling.trade_sizes == TradeSizeDistribution::constant
                                ? static_cast<Shares>(scaling.mean_trade_size)
                                : 1 + extra(rng);
            st.side = ev.e >= 0.0 ? Side::buy : Side::sell;
            st.matched_quote_seq = n;
            st.event_time = ev.timestamp;
            flow.trades.push_back(std::move(st));
        }
        flow.events.push_back(ev);
    }
    return flow;
}

CltCheckResult clt_check(std::size_t replications, const ScalingParams& scaling, double horizon,
                                  std::uint64_t seed) {
    if (replications < 100) {
        throw ArgumentError("the scaling check needs at least 100 replications");
    }
    scaling.validate();
    if (!(horizon > 0.0)) {
        throw ArgumentError("horizon must be positive");
    }
    CltCheckResult out;
    out.ratios.reserve(replications);
    const double scale = std::sqrt(scaling.mean_trade_size * scaling.trade_fraction) / scaling.contribution_sd;
    std::uint64_t draw = 0;
    while (out.ratios.size() < replications) {
        const IidFlow flow = generate_iid_flow(scaling, horizon, splitmix64(seed ^ splitmix64(draw++)));
        double ofi = 0.0;
        double vol = 0.0;
        for (const auto& ev : flow.events) {
            ofi += ev.e;
        }
        for (const auto& tr : flow.trades) {
            vol += static_cast<double>(tr.trade.size);
        }
        if (vol <= 0.0) {
            ++out.redraws;
            continue;
        }
        out.ratios.push_back(scale * ofi / std::sqrt(vol));
    }
    out.ks = ks_test_normal(out.ratios);
    return out;
}

}  // namespace ofi
