#pragma once

// Event-driven compaction of equal hard disks whose common diameter grows
// linearly in time inside the unit square (the "billiards" method). Disks
// fly ballistically, collide elastically, and receive a small extra normal
// kick so that growing surfaces always separate after contact. The run ends
// when the diameter stops growing.

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diskpack/core.hpp"

namespace diskpack {

struct SimParams {
  double growth_rate = 1e-3;          // diameter increase per unit time
  double initial_speed_scale = 1.0;   // RMS speed; velocities are rescaled to it
  double jam_rel_growth_tol = 1e-13;  // relative growth per event window that counts as jammed
  std::int64_t event_window = 10000;  // collisions per jamming check
  std::int64_t max_events = 200'000'000;
  double neighbor_cell_size_factor = 1.2;
  double mean_free_path_tol = 1e-9;   // in units of the diameter
  std::int64_t rethermalize_interval = 1'000'000;
  std::int64_t rescale_interval = 0;  // collisions between speed rescales; 0 = event_window

  /// Short stable text identifying the parameter set.
  std::string digest() const;
  void validate() const;
};

struct PackResult {
  Packing packing;
  bool jammed = false;
  std::int64_t events_processed = 0;
  std::vector<std::pair<double, double>> m_trace;  // (time, m)
  std::uint64_t seed = 0;
  double diameter = 0.0;  // engine-frame diameter at the end of the run
};

enum class Predictor { CellGrid, BruteForce };

inline constexpr int kLeftWall = -1;
inline constexpr int kRightWall = -2;
inline constexpr int kBottomWall = -3;
inline constexpr int kTopWall = -4;
inline constexpr int kCellCrossing = -5;
inline constexpr int kNoEvent = -6;

struct Event {
  double time = 0.0;
  int disk = -1;
  int partner = kNoEvent;  // disk index, or one of the k*Wall / kCellCrossing codes
  int crossing = 0;        // for kCellCrossing: 0=-x 1=+x 2=-y 3=+y
  std::uint64_t disk_epoch = 0;
  std::uint64_t partner_epoch = 0;
  std::uint64_t generation = 0;

  bool is_wall() const { return partner <= kLeftWall && partner >= kTopWall; }
  bool is_disk_pair() const { return partner >= 0; }
};

/// A committed collision, as recorded by the engine.
struct Collision {
  double time;  // absolute engine time
  int disk;
  int partner;
};

class BilliardsEngine {
 public:
  BilliardsEngine(std::vector<Point> positions, std::vector<Point> velocities, double diameter,
                  const SimParams& params, Predictor predictor = Predictor::CellGrid);

  /// Earliest future event for `disk`: collision with a wall or another disk,
  /// or a cell crossing under the cell-grid predictor.
  Event predict_event(int disk) const;

  /// Applies the velocity change of a collision event; positions of the
  /// participants are advanced to the event time first.
  void resolve_collision(const Event& event);

  /// Processes queued events until the next collision has been committed.
  /// Returns nullopt when no further event exists (static disks, no growth).
  std::optional<Collision> next_collision();

  double now() const { return elapsed_ + now_; }
  double diameter() const { return diameter_at(now_); }
  int n() const { return static_cast<int>(disks_.size()); }
  std::vector<Point> positions() const;
  std::vector<Point> velocities() const;
  double rms_speed() const;
  std::uint64_t epoch(int disk) const { return disks_[disk].epoch; }

  /// Moves all disks to the current time and restarts the local clock at
  /// zero (keeps time values small for accuracy).
  void synchronize();
  void rescale_speeds(double target_rms);
  void set_velocities(std::vector<Point> velocities);
  /// Smallest pairwise distance relative to the current diameter, minus one.
  double min_relative_gap() const;

 private:
  struct Disk {
    Point pos;  // position at time t
    Point vel;
    double t = 0.0;
    std::uint64_t epoch = 0;
    int cx = 0;
    int cy = 0;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };

  double diameter_at(double t) const { return base_diameter_ + params_.growth_rate * t; }
  Point position_at(const Disk& d, double t) const;
  double predict_pair(int i, int j) const;
  double predict_wall(int i, int& wall) const;
  void consider_partner(int i, int j, Event& best) const;
  void schedule(int disk);
  void rebuild_all();
  void rebuild_grid();
  int cell_index(int cx, int cy) const { return cy * cells_ + cx; }
  void insert_cell(int disk);
  void remove_cell(int disk);

  SimParams params_;
  Predictor predictor_;
  std::vector<Disk> disks_;
  double base_diameter_ = 0.0;
  double now_ = 0.0;
  double elapsed_ = 0.0;
  std::uint64_t generation_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;

  int cells_ = 1;
  double rebuild_time_ = 0.0;
  std::vector<std::vector<int>> cell_members_;
};

/// Deterministic 64-bit stream with a portable uniform mapping.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Velocities with zero mean drawn from the stream, scaled to RMS `speed`.
std::vector<Point> random_velocities(int n, double speed, SeedStream& rng);

PackResult pack_random(int n, const SimParams& params, std::uint64_t seed,
                       Predictor predictor = Predictor::CellGrid);

/// Starts from `config` (engine frame) with velocities drawn from `seed`.
PackResult tighten(const Configuration& config, const SimParams& params, std::uint64_t seed,
                   Predictor predictor = Predictor::CellGrid);

struct BestOfResult {
  PackResult best;
  std::vector<std::pair<std::uint64_t, double>> per_seed_m;  // sorted by seed
};

/// Runs pack_random for every seed in increasing order; the best m wins,
/// ties going to the smaller seed. `on_seed` sees each finished run.
BestOfResult best_of(int n, const SimParams& params, std::span<const std::uint64_t> seeds,
                     const std::function<void(const PackResult&)>& on_seed = {});

/// Seeds base, base+1, ..., base+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);

/// Converts a normalized packing back to an engine configuration whose
/// centers fill [d/2, 1 - d/2].
Configuration to_configuration(const Packing& p);

}  // namespace diskpack
