// flow.hpp: best-quote event contributions and their aggregation onto a
// uniform time grid.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ofi/types.hpp"

namespace ofi {

/// Signed share contribution of the transition prev -> cur:
///   1{Pb >= Pb'} qb - 1{Pb <= Pb'} qb' - 1{Pa <= Pa'} qa + 1{Pa >= Pa'} qa'
/// where primes denote `prev`. Positive values mean more demand or less
/// supply at the touch.
double event_contribution(const NbboSnapshot& prev, const NbboSnapshot& cur);

/// One event per consecutive pair of snapshots within a day; the first
/// snapshot of each day only seeds state. Crossed snapshots are skipped.
std::vector<BookEvent> classify_events(std::span<const NbboSnapshot> nbbo);

/// AD_i = sum of (qb + qa) over the snapshots stamped in window i, divided by
/// 2 (m_i - 1) where m_i is their count. Undefined for m_i < 2.
std::vector<std::optional<double>> average_depth(std::span<const NbboSnapshot> nbbo, const TimeGrid& grid);

struct BucketOptions {
    /// Leave events that moved a best price out of OFI.
    bool exclude_price_changing = false;
};

/// Aggregates one (symbol, day) onto `grid`. Events and trades stamped at t
/// land in the bucket (t_k, t_{k+1}] containing t. dp_ticks is the change in
/// the mid prevailing at the two grid points, in ticks; a bucket is defined
/// only when a mid exists at its left grid point. Crossed snapshots never
/// set the mid. Unsigned trades count toward VOL but not TI.
BucketSeries bucketize(std::span<const BookEvent> events, std::span<const NbboSnapshot> nbbo,
                       std::span<const SignedTrade> trades, const TimeGrid& grid,
                       const BucketOptions& options = {});

/// `day,window,bucket,dp_ticks,ofi,ti,vol,ntrades,nevents,ad`; undefined
/// values are left empty.
void write_bucket_csv(std::ostream& out, std::span<const BucketSeries> series);

/// Sample autocorrelations at lags 1..max_lag with the biased (1/n)
/// normalization.
std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag);

}  // namespace ofi
