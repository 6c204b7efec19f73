#include "driftforge/driftgen.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "driftforge/error.hpp"
#include "driftforge/lexswap.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

namespace {

void require_multiclass(const Corpus& stream) {
  if (stream.num_labels < 2)
    throw Error(fmt::format("drift generation needs K >= 2, got K = {}", stream.num_labels));
}

void require_increasing(const std::vector<std::size_t>& points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] <= points[i - 1])
      throw Error(fmt::format("drift points must be strictly increasing ({} then {})", points[i - 1],
                              points[i]));
  }
}

DriftedStream passthrough(const Corpus& stream, DriftMethod method) {
  DriftedStream out;
  out.stream = stream;
  out.spec.method = method;
  out.source = stream.name;
  return out;
}

// Count of points <= i, i.e. the number of drifts that precede instance i.
std::size_t region_of(std::size_t i, const std::vector<std::size_t>& points) {
  return static_cast<std::size_t>(std::upper_bound(points.begin(), points.end(), i) - points.begin());
}

}  // namespace

std::string_view to_string(DriftMethod method) {
  switch (method) {
    case DriftMethod::None: return "none";
    case DriftMethod::ClassSwap: return "class_swap";
    case DriftMethod::ClassShift: return "class_shift";
    case DriftMethod::TimeSliceRemoval: return "time_slice_removal";
    case DriftMethod::AdjectiveSwap: return "adjective_swap";
  }
  return "none";
}

DriftMethod parse_drift_method(std::string_view name) {
  for (auto m : {DriftMethod::None, DriftMethod::ClassSwap, DriftMethod::ClassShift,
                 DriftMethod::TimeSliceRemoval, DriftMethod::AdjectiveSwap}) {
    if (to_string(m) == name) return m;
  }
  throw Error(fmt::format("unknown drift method \"{}\"", name));
}

std::string_view to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::Swap: return "swap";
    case DriftKind::Shift: return "shift";
    case DriftKind::Gap: return "gap";
    case DriftKind::AdjSwap: return "adjswap";
  }
  return "swap";
}

DriftKind parse_drift_kind(std::string_view name) {
  for (auto k : {DriftKind::Swap, DriftKind::Shift, DriftKind::Gap, DriftKind::AdjSwap}) {
    if (to_string(k) == name) return k;
  }
  throw Error(fmt::format("unknown drift kind \"{}\"", name));
}

DriftedStream class_swap(const Corpus& stream, std::size_t t) {
  require_multiclass(stream);
  DriftedStream out = passthrough(stream, DriftMethod::ClassSwap);
  out.spec.drift_points = {t};
  if (t > stream.size()) {
    out.warnings.push_back(
        fmt::format("class swap point {} is beyond stream length {}; stream left unchanged", t, stream.size()));
    return out;
  }
  const int top = stream.num_labels - 1;
  for (std::size_t i = t; i < out.stream.size(); ++i) {
    auto& label = out.stream.instances[i].label;
    label = top - label;
  }
  out.annotations.push_back({t, DriftKind::Swap});
  return out;
}

DriftedStream class_shift(const Corpus& stream, const std::vector<std::size_t>& points) {
  require_multiclass(stream);
  require_increasing(points);
  DriftedStream out = passthrough(stream, DriftMethod::ClassShift);
  out.spec.drift_points = points;

  std::vector<std::size_t> active;
  for (const auto p : points) {
    if (p > stream.size()) {
      out.warnings.push_back(
          fmt::format("class shift point {} is beyond stream length {}; ignored", p, stream.size()));
      continue;
    }
    active.push_back(p);
    out.annotations.push_back({p, DriftKind::Shift});
  }

  const auto k = static_cast<std::size_t>(stream.num_labels);
  for (std::size_t i = active.empty() ? stream.size() : active.front(); i < stream.size(); ++i) {
    auto& label = out.stream.instances[i].label;
    const std::size_t shifts = region_of(i, active) % k;
    label = static_cast<int>((static_cast<std::size_t>(label) + shifts) % k);
  }
  return out;
}

std::set<int> select_removal_years(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k == 0) return {};
  std::set<int> present;
  for (const auto& inst : corpus.instances) present.insert(year_of(inst.timestamp));
  std::vector<int> eligible;
  if (present.size() > 2) eligible.assign(std::next(present.begin()), std::prev(present.end()));
  if (eligible.size() < k)
    throw Error(fmt::format("need {} removable years but the corpus has only {} (years strictly inside its span)",
                            k, eligible.size()));

  Rng rng(mix_seed(seed, 0x7e4125ULL));
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  return {eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(k)};
}

DriftedStream time_slice_removal(const Corpus& corpus, const std::set<int>& years,
                                 const SampleSpec& spec) {
  std::set<int> present;
  for (const auto& inst : corpus.instances) present.insert(year_of(inst.timestamp));
  for (const int y : years) {
    if (!present.contains(y)) throw Error(fmt::format("removed year {} does not occur in the corpus", y));
  }

  Corpus kept;
  kept.name = corpus.name;
  kept.num_labels = corpus.num_labels;
  for (const auto& inst : corpus.instances) {
    if (!years.contains(year_of(inst.timestamp))) kept.instances.push_back(inst);
  }
  if (kept.size() < spec.target_length)
    throw Error(fmt::format("removing {} year(s) leaves {} instances, fewer than the target length {}",
                            years.size(), kept.size(), spec.target_length));

  DriftedStream out;
  out.stream = spec.target_length == kept.size() ? std::move(kept) : sample_stratified_temporal(kept, spec);
  out.spec.method = DriftMethod::TimeSliceRemoval;
  out.spec.removed_years = years;
  out.spec.removal_count = years.size();
  out.spec.seed = spec.seed;
  out.source = corpus.name;

  const auto& inst = out.stream.instances;
  for (std::size_t i = 1; i < inst.size(); ++i) {
    const int prev = year_of(inst[i - 1].timestamp);
    const int cur = year_of(inst[i].timestamp);
    if (prev == cur) continue;
    // A removed year y with prev < y <= cur lies between the two instances.
    const auto it = years.upper_bound(prev);
    if (it != years.end() && *it <= cur) out.annotations.push_back({i, DriftKind::Gap});
  }
  return out;
}

DriftedStream apply_drift(const Corpus& stream, const DriftSpec& spec, const DriftDependencies& deps) {
  DriftedStream out;
  switch (spec.method) {
    case DriftMethod::None:
      out = passthrough(stream, DriftMethod::None);
      break;
    case DriftMethod::ClassSwap:
      if (spec.drift_points.size() != 1)
        throw Error(fmt::format("class swap takes exactly one drift point, got {}", spec.drift_points.size()));
      out = class_swap(stream, spec.drift_points.front());
      break;
    case DriftMethod::ClassShift:
      out = class_shift(stream, spec.drift_points);
      break;
    case DriftMethod::TimeSliceRemoval: {
      const Corpus& source = deps.source ? *deps.source : stream;
      const std::set<int> years = spec.removed_years.empty()
                                      ? select_removal_years(source, spec.removal_count, spec.seed)
                                      : spec.removed_years;
      std::size_t remaining = 0;
      for (const auto& inst : source.instances) remaining += years.contains(year_of(inst.timestamp)) ? 0 : 1;
      const SampleSpec sample{deps.sample_length == 0 ? remaining : deps.sample_length, spec.seed};
      out = time_slice_removal(source, years, sample);
      break;
    }
    case DriftMethod::AdjectiveSwap: {
      if (!deps.lexicon) throw Error("adjective swap requires a WordNet adjective lexicon");
      const LexiconTagger fallback(*deps.lexicon);
      const Tagger& tagger = deps.tagger ? *deps.tagger : fallback;
      out = adjective_swap_stream(stream, spec.drift_points, *deps.lexicon, tagger);
      break;
    }
  }
  // Provenance keeps the caller's spec, with the years actually removed.
  const auto years = std::move(out.spec.removed_years);
  out.spec = spec;
  if (spec.method == DriftMethod::TimeSliceRemoval) out.spec.removed_years = years;
  return out;
}

void write_annotations(std::ostream& out, const std::vector<DriftAnnotation>& annotations) {
  for (const auto& a : annotations) out << a.index << '\t' << to_string(a.kind) << '\n';
}

std::vector<DriftAnnotation> read_annotations(std::istream& in) {
  std::vector<DriftAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(fmt::format("drift sidecar line {}: expected index<TAB>kind", line_no));
    DriftAnnotation a;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, a.index);
    if (ec != std::errc{} || ptr != line.data() + tab)
      throw Error(fmt::format("drift sidecar line {}: bad index", line_no));
    a.kind = parse_drift_kind(std::string_view(line).substr(tab + 1));
    out.push_back(a);
  }
  return out;
}

}  // namespace driftforge
