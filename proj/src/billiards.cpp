#include "diskpack/billiards.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace diskpack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Smallest positive root of a*t^2 + 2*b*t + c = 0 with c >= 0 describing the
// squared surface gap; +inf if the surfaces never meet.
double first_contact(double a, double b, double c) {
  c = std::max(c, 0.0);
  if (a >= 0.0) {
    if (b >= 0.0) return kInf;
    const double disc = b * b - a * c;
    if (disc < 0.0) return kInf;
    return c / (-b + std::sqrt(disc));
  }
  // Growth outpaces the relative motion: contact is certain.
  const double disc = b * b - a * c;
  const double root = std::sqrt(std::max(disc, 0.0));
  if (b > 0.0) return (b + root) / (-a);
  const double denom = -b + root;
  return denom > 0.0 ? c / denom : 0.0;
}

}  // namespace

std::string SimParams::digest() const {
  std::ostringstream s;
  s.precision(17);
  s << "g=" << growth_rate << ";v=" << initial_speed_scale << ";tol=" << jam_rel_growth_tol
    << ";win=" << event_window << ";max=" << max_events << ";cell=" << neighbor_cell_size_factor
    << ";mfp=" << mean_free_path_tol << ";therm=" << rethermalize_interval
    << ";rescale=" << rescale_interval;
  return fnv1a_hex(s.str());
}

void SimParams::validate() const {
  if (!(growth_rate > 0.0)) throw std::invalid_argument("growth_rate must be positive");
  if (!(initial_speed_scale >= 0.0)) throw std::invalid_argument("initial_speed_scale must be >= 0");
  if (!(jam_rel_growth_tol > 0.0 && jam_rel_growth_tol < 1e-6)) {
    throw std::invalid_argument("jam_rel_growth_tol must lie in (0, 1e-6)");
  }
  if (event_window <= 0 || max_events <= 0) throw std::invalid_argument("event counts must be positive");
  if (!(neighbor_cell_size_factor >= 1.0)) throw std::invalid_argument("cell size factor must be >= 1");
}

double SeedStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<Point> random_velocities(int n, double speed, SeedStream& rng) {
  std::vector<Point> v(n);
  Point mean{};
  for (auto& p : v) {
    p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    mean = mean + p;
  }
  if (n > 1) {
    mean = (1.0 / n) * mean;
    for (auto& p : v) p = p - mean;
  }
  double sq = 0.0;
  for (auto p : v) sq += dot(p, p);
  const double rms = n > 0 ? std::sqrt(sq / n) : 0.0;
  const double factor = rms > 0.0 ? speed / rms : 0.0;
  for (auto& p : v) p = factor * p;
  return v;
}

bool BilliardsEngine::Later::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.disk != b.disk) return a.disk > b.disk;
  return a.partner > b.partner;
}

BilliardsEngine::BilliardsEngine(std::vector<Point> positions, std::vector<Point> velocities,
                                 double diameter, const SimParams& params, Predictor predictor)
    : params_(params), predictor_(predictor), base_diameter_(diameter) {
  if (positions.size() != velocities.size()) {
    throw std::invalid_argument("positions and velocities differ in length");
  }
  disks_.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    disks_[i].pos = positions[i];
    disks_[i].vel = velocities[i];
  }
  rebuild_grid();
}

Point BilliardsEngine::position_at(const Disk& d, double t) const {
  return d.pos + (t - d.t) * d.vel;
}

std::vector<Point> BilliardsEngine::positions() const {
  std::vector<Point> out;
  out.reserve(disks_.size());
  for (const auto& d : disks_) out.push_back(position_at(d, now_));
  return out;
}

std::vector<Point> BilliardsEngine::velocities() const {
  std::vector<Point> out;
  out.reserve(disks_.size());
  for (const auto& d : disks_) out.push_back(d.vel);
  return out;
}

double BilliardsEngine::rms_speed() const {
  if (disks_.empty()) return 0.0;
  double sq = 0.0;
  for (const auto& d : disks_) sq += dot(d.vel, d.vel);
  return std::sqrt(sq / static_cast<double>(disks_.size()));
}

double BilliardsEngine::predict_pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  const Disk& a = disks_[i];
  const Disk& b = disks_[j];
  const double t_ref = std::max(a.t, b.t);
  const Point dp = position_at(b, t_ref) - position_at(a, t_ref);
  const Point dv = b.vel - a.vel;
  const double d = diameter_at(t_ref);
  const double g = params_.growth_rate;
  const double dist = norm(dp);
  const double tau = first_contact(dot(dv, dv) - g * g, dot(dp, dv) - d * g, (dist - d) * (dist + d));
  return t_ref + tau;
}

double BilliardsEngine::predict_wall(int i, int& wall) const {
  const Disk& d = disks_[i];
  const double r = 0.5 * diameter_at(d.t);
  const double half_g = 0.5 * params_.growth_rate;
  double best = kInf;
  wall = kNoEvent;
  auto consider = [&](double gap, double closing, int code) {
    if (closing <= 0.0) return;
    const double t = d.t + std::max(gap, 0.0) / closing;
    if (t < best) {
      best = t;
      wall = code;
    }
  };
  consider(d.pos.x - r, half_g - d.vel.x, kLeftWall);
  consider(1.0 - r - d.pos.x, half_g + d.vel.x, kRightWall);
  consider(d.pos.y - r, half_g - d.vel.y, kBottomWall);
  consider(1.0 - r - d.pos.y, half_g + d.vel.y, kTopWall);
  return best;
}

void BilliardsEngine::consider_partner(int i, int j, Event& best) const {
  const double t = predict_pair(i, j);
  if (t < best.time || (t == best.time && t < kInf && j < best.partner)) {
    best.time = t;
    best.partner = j;
    best.partner_epoch = disks_[j].epoch;
  }
}

Event BilliardsEngine::predict_event(int i) const {
  const Disk& d = disks_[i];
  Event best;
  best.time = kInf;
  best.disk = i;
  best.partner = kNoEvent;
  best.disk_epoch = d.epoch;
  best.generation = generation_;

  int wall = kNoEvent;
  const double tw = predict_wall(i, wall);
  if (tw < best.time) {
    best.time = tw;
    best.partner = wall;
  }

  if (predictor_ == Predictor::BruteForce) {
    for (int j = 0; j < n(); ++j) {
      if (j != i) consider_partner(i, j, best);
    }
  } else {
    for (int cy = std::max(0, d.cy - 1); cy <= std::min(cells_ - 1, d.cy + 1); ++cy) {
      for (int cx = std::max(0, d.cx - 1); cx <= std::min(cells_ - 1, d.cx + 1); ++cx) {
        for (int j : cell_members_[cell_index(cx, cy)]) {
          if (j != i) consider_partner(i, j, best);
        }
      }
    }
    if (cells_ > 1) {
      const double w = 1.0 / cells_;
      auto crossing = [&](double x, double v, int c, int lo_code, int hi_code) {
        if (v > 0.0 && c < cells_ - 1) {
          return std::pair{d.t + std::max((c + 1) * w - x, 0.0) / v, hi_code};
        }
        if (v < 0.0 && c > 0) {
          return std::pair{d.t + std::min(c * w - x, 0.0) / v, lo_code};
        }
        return std::pair{kInf, 0};
      };
      const auto [tx, codex] = crossing(d.pos.x, d.vel.x, d.cx, 0, 1);
      const auto [ty, codey] = crossing(d.pos.y, d.vel.y, d.cy, 2, 3);
      const auto [tc, code] = tx <= ty ? std::pair{tx, codex} : std::pair{ty, codey};
      if (tc < best.time || (tc == best.time && tc < kInf)) {
        best.time = tc;
        best.partner = kCellCrossing;
        best.crossing = code;
        best.partner_epoch = 0;
      }
    }
  }
  if (best.partner != kNoEvent) best.time = std::max(best.time, now_);
  return best;
}

void BilliardsEngine::resolve_collision(const Event& ev) {
  if (ev.disk < 0 || ev.disk >= n() || ev.disk_epoch != disks_[ev.disk].epoch ||
      (ev.is_disk_pair() && ev.partner_epoch != disks_[ev.partner].epoch)) {
    throw Error(ErrorCode::StaleEvent, "event invalidated by an earlier collision");
  }
  if (!ev.is_disk_pair() && !ev.is_wall()) {
    throw std::invalid_argument("not a collision event");
  }
  const double g = params_.growth_rate;
  Disk& a = disks_[ev.disk];
  a.pos = position_at(a, ev.time);
  a.t = ev.time;
  if (ev.is_disk_pair()) {
    Disk& b = disks_[ev.partner];
    b.pos = position_at(b, ev.time);
    b.t = ev.time;
    const Point delta = b.pos - a.pos;
    const double len = norm(delta);
    const Point normal = len > 0.0 ? (1.0 / len) * delta : Point{1.0, 0.0};
    const double u = dot(b.vel - a.vel, normal);
    const double impulse = u - g;
    a.vel = a.vel + impulse * normal;
    b.vel = b.vel - impulse * normal;
    ++b.epoch;
  } else {
    switch (ev.partner) {
      case kLeftWall: a.vel.x = -a.vel.x + g; break;
      case kRightWall: a.vel.x = -a.vel.x - g; break;
      case kBottomWall: a.vel.y = -a.vel.y + g; break;
      case kTopWall: a.vel.y = -a.vel.y - g; break;
      default: break;
    }
  }
  ++a.epoch;
}

void BilliardsEngine::schedule(int disk) {
  Event ev = predict_event(disk);
  if (ev.partner != kNoEvent) queue_.push(ev);
}

void BilliardsEngine::rebuild_all() {
  ++generation_;
  queue_ = {};
  for (int i = 0; i < n(); ++i) schedule(i);
}

void BilliardsEngine::insert_cell(int i) {
  cell_members_[cell_index(disks_[i].cx, disks_[i].cy)].push_back(i);
}

void BilliardsEngine::remove_cell(int i) {
  auto& members = cell_members_[cell_index(disks_[i].cx, disks_[i].cy)];
  members.erase(std::find(members.begin(), members.end(), i));
}

void BilliardsEngine::rebuild_grid() {
  const double d = diameter();
  const double factor = params_.neighbor_cell_size_factor;
  const int cap = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n())))));
  int cells = cap;
  if (predictor_ == Predictor::BruteForce) {
    cells = 1;
  } else if (d > 0.0) {
    cells = std::clamp(static_cast<int>(std::floor(1.0 / (factor * d))), 1, cap);
    // At the rebuild instant d*factor*cells == 1; step down so the next rebuild lies ahead.
    while (cells > 1 && cells * factor * d >= 1.0 - 1e-9) --cells;
  }
  cells_ = cells;
  cell_members_.assign(static_cast<std::size_t>(cells_) * cells_, {});
  for (int i = 0; i < n(); ++i) {
    const Point p = position_at(disks_[i], now_);
    disks_[i].cx = std::clamp(static_cast<int>(std::floor(p.x * cells_)), 0, cells_ - 1);
    disks_[i].cy = std::clamp(static_cast<int>(std::floor(p.y * cells_)), 0, cells_ - 1);
    insert_cell(i);
  }
  const double g = params_.growth_rate;
  rebuild_time_ = (cells_ > 1 && g > 0.0)
                      ? std::max(now_, (1.0 / (cells_ * factor) - base_diameter_) / g)
                      : kInf;
  rebuild_all();
}

std::optional<Collision> BilliardsEngine::next_collision() {
  while (!queue_.empty()) {
    const Event ev = queue_.top();
    if (ev.time > rebuild_time_) {
      now_ = rebuild_time_;
      rebuild_grid();
      continue;
    }
    queue_.pop();
    if (ev.generation != generation_ || ev.disk_epoch != disks_[ev.disk].epoch) continue;
    now_ = std::max(now_, ev.time);
    if (ev.partner == kCellCrossing) {
      remove_cell(ev.disk);
      Disk& d = disks_[ev.disk];
      switch (ev.crossing) {
        case 0: --d.cx; break;
        case 1: ++d.cx; break;
        case 2: --d.cy; break;
        default: ++d.cy; break;
      }
      insert_cell(ev.disk);
      schedule(ev.disk);
      continue;
    }
    if (ev.is_disk_pair() && ev.partner_epoch != disks_[ev.partner].epoch) {
      schedule(ev.disk);
      continue;
    }
    Event committed = ev;
    committed.time = now_;
    resolve_collision(committed);
    schedule(ev.disk);
    if (ev.is_disk_pair()) schedule(ev.partner);
    return Collision{elapsed_ + now_, ev.disk, ev.partner};
  }
  return std::nullopt;
}

void BilliardsEngine::synchronize() {
  for (auto& d : disks_) {
    d.pos = position_at(d, now_);
    d.t = 0.0;
  }
  base_diameter_ = diameter_at(now_);
  elapsed_ += now_;
  if (rebuild_time_ < kInf) rebuild_time_ -= now_;
  now_ = 0.0;
  rebuild_all();
}

void BilliardsEngine::rescale_speeds(double target_rms) {
  const double rms = rms_speed();
  if (!(rms > 0.0)) return;
  const double factor = target_rms / rms;
  for (auto& d : disks_) {
    d.pos = position_at(d, now_);
    d.t = now_;
    d.vel = factor * d.vel;
    ++d.epoch;
  }
  rebuild_all();
}

void BilliardsEngine::set_velocities(std::vector<Point> velocities) {
  for (std::size_t i = 0; i < disks_.size(); ++i) {
    auto& d = disks_[i];
    d.pos = position_at(d, now_);
    d.t = now_;
    d.vel = velocities[i];
    ++d.epoch;
  }
  rebuild_all();
}

double BilliardsEngine::min_relative_gap() const {
  const auto pos = positions();
  const double d = diameter();
  if (!(d > 0.0)) return kInf;
  double best = kInf;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    best = std::min({best, (pos[i].x - 0.5 * d) / d, (1.0 - 0.5 * d - pos[i].x) / d,
                     (pos[i].y - 0.5 * d) / d, (1.0 - 0.5 * d - pos[i].y) / d});
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      best = std::min(best, distance(pos[i], pos[j]) / d - 1.0);
    }
  }
  return best;
}

namespace {

PackResult run_engine(BilliardsEngine& engine, const SimParams& params, SeedStream& rng,
                      std::uint64_t seed) {
  const int n = engine.n();
  PackResult result;
  result.seed = seed;
  const std::int64_t rescale_every =
      params.rescale_interval > 0 ? params.rescale_interval : params.event_window;
  auto nominal_m = [](double d) { return d / (1.0 - d); };

  double window_d = engine.diameter();
  double window_t = engine.now();
  std::int64_t participations = 0;
  std::int64_t events = 0;
  result.m_trace.emplace_back(engine.now(), nominal_m(window_d));

  while (events < params.max_events) {
    const auto c = engine.next_collision();
    if (!c) break;
    ++events;
    participations += c->partner >= 0 ? 2 : 1;
    if (params.initial_speed_scale > 0.0 && events % rescale_every == 0) {
      engine.rescale_speeds(params.initial_speed_scale);
    }
    if (events % params.event_window == 0) {
      const double d = engine.diameter();
      const double rel = (d - window_d) / d;
      const double mfp = engine.rms_speed() * (engine.now() - window_t) * n /
                         static_cast<double>(std::max<std::int64_t>(participations, 1));
      engine.synchronize();
      result.m_trace.emplace_back(engine.now(), nominal_m(d));
      if (rel < params.jam_rel_growth_tol && mfp < params.mean_free_path_tol * d) {
        result.jammed = true;
        break;
      }
      window_d = d;
      window_t = engine.now();
      participations = 0;
    }
    if (params.rethermalize_interval > 0 && events % params.rethermalize_interval == 0) {
      engine.set_velocities(random_velocities(n, std::max(params.initial_speed_scale, 1e-3), rng));
    }
  }
  result.events_processed = events;
  result.diameter = engine.diameter();
  result.packing = make_packing(engine.positions(), result.diameter,
                                FromSimulation{seed, params.digest()});
  return result;
}

}  // namespace

PackResult pack_random(int n, const SimParams& params, std::uint64_t seed, Predictor predictor) {
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "pack_random needs n >= 2");
  params.validate();
  SeedStream rng(seed);
  std::vector<Point> pos;
  pos.reserve(n);
  while (static_cast<int>(pos.size()) < n) {
    const Point p{rng.uniform(), rng.uniform()};
    if (std::none_of(pos.begin(), pos.end(), [&](Point q) { return q == p; })) pos.push_back(p);
  }
  auto vel = random_velocities(n, params.initial_speed_scale, rng);
  BilliardsEngine engine(std::move(pos), std::move(vel), 0.0, params, predictor);
  return run_engine(engine, params, rng, seed);
}

PackResult tighten(const Configuration& config, const SimParams& params, std::uint64_t seed,
                   Predictor predictor) {
  const int n = config.n();
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "tighten needs n >= 2");
  params.validate();
  const double d = config.diameter;
  const double tol = 1e-12 * std::max(d, 1e-300);
  for (int i = 0; i < n; ++i) {
    const Point c = config.centers[i];
    if (c.x < 0.5 * d - tol || c.x > 1.0 - 0.5 * d + tol || c.y < 0.5 * d - tol ||
        c.y > 1.0 - 0.5 * d + tol) {
      throw Error(ErrorCode::InvalidStart, "disk " + std::to_string(i) + " crosses the boundary");
    }
    for (int j = i + 1; j < n; ++j) {
      if (distance(c, config.centers[j]) < d - tol) {
        throw Error(ErrorCode::InvalidStart,
                    "disks " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
    }
  }
  SeedStream rng(seed);
  auto vel = random_velocities(n, params.initial_speed_scale, rng);
  std::vector<Point> pos = config.centers;
  // Pull centers that sit a rounding error outside the allowed box back in.
  for (auto& c : pos) {
    c.x = std::clamp(c.x, 0.5 * d, 1.0 - 0.5 * d);
    c.y = std::clamp(c.y, 0.5 * d, 1.0 - 0.5 * d);
  }
  BilliardsEngine engine(std::move(pos), std::move(vel), d, params, predictor);
  return run_engine(engine, params, rng, seed);
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
  return out;
}

BestOfResult best_of(int n, const SimParams& params, std::span<const std::uint64_t> seeds,
                     const std::function<void(const PackResult&)>& on_seed) {
  if (seeds.empty()) throw std::invalid_argument("best_of needs at least one seed");
  std::vector<std::uint64_t> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  BestOfResult out;
  bool have = false;
  bool any_jammed = false;
  for (std::uint64_t seed : sorted) {
    PackResult r = pack_random(n, params, seed);
    out.per_seed_m.emplace_back(seed, r.packing.m);
    if (on_seed) on_seed(r);
    any_jammed = any_jammed || r.jammed;
    // Seeds are visited in increasing order, so strict > keeps the smallest seed on ties.
    if (!have || r.packing.m > out.best.packing.m) {
      out.best = std::move(r);
      have = true;
    }
  }
  if (!any_jammed) {
    throw Error(ErrorCode::NoConvergence, "no seed reached jamming within max_events");
  }
  return out;
}

Configuration to_configuration(const Packing& p) {
  // Physical square side is 1 + m in packing units; rescale it to 1.
  const double side = 1.0 + p.m;
  Configuration c;
  c.diameter = p.m / side;
  c.centers.reserve(p.centers.size());
  for (Point q : p.centers) c.centers.push_back({(q.x + 0.5 * p.m) / side, (q.y + 0.5 * p.m) / side});
  return c;
}

}  // namespace diskpack
