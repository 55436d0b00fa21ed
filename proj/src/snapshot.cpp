#include <istream>
#include <ostream>

#include "binary_io.hpp"
#include "slants/error.hpp"
#include "slants/stream.hpp"

namespace slants {

namespace {

constexpr char kMagic[] = "SLANTSNP";
constexpr std::uint64_t kVersion = 1;

using detail::BinaryReader;
using detail::BinaryWriter;

void write_vector(BinaryWriter& w, const Eigen::VectorXd& v) {
  w.doubles(v.data(), static_cast<std::size_t>(v.size()));
}

Eigen::VectorXd read_vector(BinaryReader& r) {
  const auto v = r.doubles();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_config(BinaryWriter& w, const StreamConfig& c) {
  w.u64(c.dim);
  w.u64(c.target);
  w.u64(c.max_lag);
  w.u64(c.basis_size);
  w.u64(static_cast<std::uint64_t>(c.degree));
  w.f64(c.q_lo);
  w.f64(c.q_hi);
  w.u64(c.warmup);
  w.u64(c.schedule.kind == WeightSchedule::Kind::harmonic ? 0 : 1);
  w.f64(c.schedule.c);
  w.f64(c.channels.delta);
  w.f64(c.channels.nu);
  w.u64(c.channels.window);
  w.u64(c.channels.mode == WindowMode::tumbling ? 0 : 1);
  w.u64(c.em_iters);
  w.f64(c.rel_tol);
  w.u64(c.warmup_em_iters);
  w.f64(c.lambda0);
  w.f64(c.lambda0_scale);
  w.f64(c.tau0);
  w.f64(c.tau_scale);
  w.f64(c.tau_shrink);
}

StreamConfig read_config(BinaryReader& r) {
  StreamConfig c;
  c.dim = r.size();
  c.target = r.size();
  c.max_lag = r.size();
  c.basis_size = r.size();
  c.degree = static_cast<int>(r.size(64));
  c.q_lo = r.f64();
  c.q_hi = r.f64();
  c.warmup = r.size();
  c.schedule.kind = r.u64() == 0 ? WeightSchedule::Kind::harmonic : WeightSchedule::Kind::constant;
  c.schedule.c = r.f64();
  c.channels.delta = r.f64();
  c.channels.nu = r.f64();
  c.channels.window = r.size();
  c.channels.mode = r.u64() == 0 ? WindowMode::tumbling : WindowMode::sliding;
  c.em_iters = r.size();
  c.rel_tol = r.f64();
  c.warmup_em_iters = r.size();
  c.lambda0 = r.f64();
  c.lambda0_scale = r.f64();
  c.tau0 = r.f64();
  c.tau_scale = r.f64();
  c.tau_shrink = r.f64();
  return c;
}

}  // namespace

void StreamFitter::save(std::ostream& out) const {
  BinaryWriter w(out);
  write_config(w, config_);

  w.u64(window_.time());
  w.u64(window_.buffer().size());
  for (const auto& obs : window_.buffer()) w.doubles(obs);

  w.boolean(warmed_up_);
  w.u64(warmup_samples_.size());
  for (const auto& s : warmup_samples_) {
    w.f64(s.y);
    w.u64(s.t);
    w.doubles(s.covariates);
  }

  w.u64(splines_.size());
  for (const auto& cs : splines_) {
    w.boolean(cs.active());
    if (cs.active()) {
      w.u64(static_cast<std::uint64_t>(cs.basis->degree()));
      w.doubles(cs.basis->knots());
    }
    w.u64(cs.centering.count);
    w.doubles(cs.centering.mean);
  }

  w.u64(stats_.t);
  w.doubles(stats_.A.data(), static_cast<std::size_t>(stats_.A.size()));
  write_vector(w, stats_.B);

  for (const auto& b : beta_) write_vector(w, b.values());
  for (const auto& m : monitors_) {
    w.u64(m.history().size());
    for (const auto& e : m.history()) {
      w.f64(e.norm);
      w.f64(e.step);
    }
  }

  w.f64(channels_.center());
  w.f64(channels_.delta());
  for (const auto& win : channels_.windows()) {
    w.u64(win.size());
    for (double e : win) w.f64(e);
  }
  w.f64(tau_.tau());
  w.u64(tau_.shrink_count());
}

StreamFitter StreamFitter::load(std::istream& in) {
  BinaryReader r(in);
  StreamFitter f(read_config(r));

  const std::size_t t = r.size();
  std::deque<std::vector<double>> buffer(r.size(f.config_.max_lag));
  for (auto& obs : buffer) obs = r.doubles();
  f.window_.restore(t, std::move(buffer));

  f.warmed_up_ = r.boolean();
  f.warmup_samples_.resize(r.size());
  for (auto& s : f.warmup_samples_) {
    s.y = r.f64();
    s.t = r.size();
    s.covariates = r.doubles();
    if (s.covariates.size() != f.num_covariates()) {
      throw Error(ErrorCode::format_error, "snapshot sample has wrong covariate count");
    }
  }

  if (r.size() != f.splines_.size()) throw Error(ErrorCode::format_error, "snapshot covariate count mismatch");
  for (auto& cs : f.splines_) {
    if (r.boolean()) {
      const int degree = static_cast<int>(r.size(64));
      cs.basis = SplineBasis(degree, r.doubles());
      if (cs.basis->size() != f.config_.basis_size) {
        throw Error(ErrorCode::format_error, "snapshot basis size mismatch");
      }
    } else {
      cs.basis.reset();
    }
    cs.centering.count = r.size();
    cs.centering.mean = r.doubles();
  }

  const std::size_t dim = f.layout().dimension();
  f.stats_ = SufficientStats(dim);
  f.stats_.t = r.size();
  const auto a = r.doubles();
  if (a.size() != dim * dim) throw Error(ErrorCode::format_error, "snapshot Gram matrix size mismatch");
  f.stats_.A = Eigen::Map<const Eigen::MatrixXd>(a.data(), static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim));
  f.stats_.B = read_vector(r);
  if (static_cast<std::size_t>(f.stats_.B.size()) != dim) {
    throw Error(ErrorCode::format_error, "snapshot moment vector size mismatch");
  }

  for (auto& b : f.beta_) b = Coefficients(f.layout(), read_vector(r));
  for (auto& m : f.monitors_) {
    std::deque<DivergenceMonitor::Entry> history(r.size(64));
    for (auto& e : history) {
      e.norm = r.f64();
      e.step = r.f64();
    }
    m.restore(std::move(history));
  }

  const double center = r.f64();
  const double delta = r.f64();
  std::array<std::deque<double>, 3> windows;
  for (auto& win : windows) {
    win.resize(r.size());
    for (double& e : win) e = r.f64();
  }
  const double tau = r.f64();
  const std::size_t shrinks = r.size();
  if (f.warmed_up_) {
    f.channels_ = LambdaChannels(center, f.config_.channels,
                                 f.config_.schedule.kind == WeightSchedule::Kind::harmonic);
    f.channels_.restore(center, delta, std::move(windows));
    f.tau_ = TauManager(tau, f.config_.tau_shrink);
    f.tau_.restore(tau, shrinks);
  }
  return f;
}

void save_snapshot(std::ostream& out, std::span<const StreamFitter* const> fitters) {
  BinaryWriter w(out);
  w.bytes(std::string(kMagic, 8));
  w.u64(kVersion);
  w.u64(fitters.size());
  for (const auto* f : fitters) f->save(out);
  if (!out) throw Error(ErrorCode::io_error, "failed to write snapshot");
}

std::vector<StreamFitter> load_snapshot(std::istream& in) {
  BinaryReader r(in);
  if (r.bytes(8) != std::string(kMagic, 8)) throw Error(ErrorCode::format_error, "not a snapshot file");
  const auto version = r.u64();
  if (version != kVersion) throw Error(ErrorCode::format_error, "unsupported snapshot version");
  const std::size_t n = r.size(1 << 20);
  std::vector<StreamFitter> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(StreamFitter::load(in));
  return out;
}

}  // namespace slants
