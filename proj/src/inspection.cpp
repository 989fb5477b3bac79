#include "canthex/inspection.hpp"

#include <algorithm>
#include <cmath>

#include "canthex/errors.hpp"

namespace canthex {

EpisodeDetector::EpisodeDetector(const EpisodeConfig& config) : config_(config) {}

void EpisodeDetector::begin_contact(double t, double v_normal) {
  current_ = ImpactEpisode{};
  current_.t_contact = t;

  // v_i: mean of the normal velocity over the pre-contact window, excluding
  // the crossing sample itself (the tool may already be decelerating there).
  double sum = 0.0;
  int n = 0;
  for (const auto& [ts, v] : approach_buffer_) {
    if (ts >= t - config_.pre_window && ts < t) {
      sum += v;
      ++n;
    }
  }
  current_.approach_velocity = n > 0 ? sum / n : v_normal;
  tracking_ = Tracking::in_contact;
}

void EpisodeDetector::close_rebound() {
  current_.complete = true;
  episodes_.push_back(current_);
  tracking_ = Tracking::idle;
}

void EpisodeDetector::feed(double t, double v_normal, double sensed_force,
                           double penetration) {
  switch (tracking_) {
    case Tracking::idle:
      if (sensed_force > config_.force_on) {
        begin_contact(t, v_normal);
        current_.peak_force = sensed_force;
        current_.max_penetration = penetration;
      } else {
        approach_buffer_.emplace_back(t, v_normal);
        // Trim anything older than the averaging window.
        const double horizon = t - 2.0 * config_.pre_window;
        while (!approach_buffer_.empty() && approach_buffer_.front().first < horizon) {
          approach_buffer_.erase(approach_buffer_.begin());
        }
      }
      break;

    case Tracking::in_contact:
      current_.peak_force = std::max(current_.peak_force, sensed_force);
      current_.max_penetration = std::max(current_.max_penetration, penetration);
      if (sensed_force < config_.force_off) {
        current_.t_separation = t;
        current_.contact_duration = t - current_.t_contact;
        current_.rebound_velocity = std::max(0.0, -v_normal);
        tracking_ = Tracking::rebound;
      }
      break;

    case Tracking::rebound:
      if (sensed_force > config_.force_on) {
        // Re-contact before the window closed: freeze what we have and treat
        // the new touch as a separate episode.
        close_rebound();
        begin_contact(t, v_normal);
        current_.peak_force = sensed_force;
        current_.max_penetration = penetration;
        break;
      }
      if (t - current_.t_separation <= config_.rebound_window) {
        current_.rebound_velocity =
            std::max(current_.rebound_velocity, -v_normal);
      } else {
        close_rebound();
        approach_buffer_.clear();
        approach_buffer_.emplace_back(t, v_normal);
      }
      break;
  }
}

void EpisodeDetector::finish(double t_end) {
  if (tracking_ == Tracking::rebound &&
      t_end - current_.t_separation >= config_.rebound_window) {
    close_rebound();
  }
}

bool EpisodeDetector::has_complete_episode() const {
  for (const auto& e : episodes_) {
    if (e.complete) return true;
  }
  return false;
}

ImpactEpisode detect_episode(const TrajectoryLog& log, const EpisodeConfig& config) {
  EpisodeDetector detector(config);
  const auto t = log.column("t");
  const auto v = log.column("vel_normal");
  const auto f = log.column("force_sensed");
  const auto pen = log.column("penetration");
  for (std::size_t i = 0; i < t.size(); ++i) {
    detector.feed(t[i], v[i], f[i], pen[i]);
  }
  if (!t.empty()) detector.finish(t.back());

  const auto& eps = detector.episodes();
  if (eps.empty()) throw NoEpisode("no complete contact episode in log");
  if (eps.size() > 1) {
    throw MultipleEpisodes("log holds " + std::to_string(eps.size()) +
                           " episodes; expected exactly one");
  }
  return eps.front();
}

double estimate_restitution(const ImpactEpisode& episode, bool* clamped) {
  if (std::abs(episode.approach_velocity) < 1e-6) {
    throw ZeroApproach("approach velocity is zero; restitution undefined");
  }
  const double raw = std::abs(episode.rebound_velocity) / episode.approach_velocity;
  if (clamped) *clamped = raw < 0.0 || raw > 1.0;
  return clamp(raw, 0.0, 1.0);
}

SurfaceEstimate estimate_stiffness(const ImpactEpisode& episode, double mass,
                                   double tool_stiffness) {
  if (mass <= 0.0 || tool_stiffness <= 0.0) {
    throw Error("inspection: mass and tool stiffness must be positive");
  }
  SurfaceEstimate est;
  est.restitution_e = estimate_restitution(episode);
  est.stiffness_kt = 0.5 * mass * episode.rebound_velocity * episode.rebound_velocity;
  est.kinetic_approach =
      0.5 * mass * episode.approach_velocity * episode.approach_velocity;

  const double ku = tool_stiffness;
  const double kt = est.stiffness_kt;
  if (std::abs(ku - kt) < 1e-9 * std::max(1.0, ku)) {
    throw SeriesPole("tool stiffness equals transferred estimate; series "
                     "relation is singular");
  }
  est.stiffness_ke = (ku * kt) / (ku - kt);

  if (episode.max_penetration > 1e-12) {
    est.deflection_stiffness = mass * episode.approach_velocity *
                               episode.approach_velocity /
                               (episode.max_penetration * episode.max_penetration);
  }
  return est;
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0; // unbiased
  int n = 0;
};

Moments moments(const std::vector<SurfaceEstimate>& trials,
                double SurfaceEstimate::*field) {
  Moments m;
  m.n = static_cast<int>(trials.size());
  for (const auto& t : trials) m.mean += t.*field;
  if (m.n > 0) m.mean /= m.n;
  for (const auto& t : trials) {
    const double d = t.*field - m.mean;
    m.var += d * d;
  }
  if (m.n > 1) m.var /= (m.n - 1);
  return m;
}

MetricOrdering order_metric(const std::string& label_a,
                            const std::vector<SurfaceEstimate>& trials_a,
                            const std::string& label_b,
                            const std::vector<SurfaceEstimate>& trials_b,
                            double SurfaceEstimate::*field) {
  const Moments a = moments(trials_a, field);
  const Moments b = moments(trials_b, field);
  MetricOrdering out;
  out.mean_a = a.mean;
  out.mean_b = b.mean;
  out.pooled_sd = std::sqrt(((a.n - 1) * a.var + (b.n - 1) * b.var) /
                            static_cast<double>(a.n + b.n - 2));
  out.strict = std::abs(a.mean - b.mean) > out.pooled_sd;
  if (out.strict) out.higher = a.mean > b.mean ? label_a : label_b;
  return out;
}

}  // namespace

ClassificationReport classify_surfaces(const std::string& label_a,
                                       const std::vector<SurfaceEstimate>& trials_a,
                                       const std::string& label_b,
                                       const std::vector<SurfaceEstimate>& trials_b) {
  if (trials_a.size() < 2 || trials_b.size() < 2) {
    throw InsufficientTrials("need at least two trials per surface");
  }
  ClassificationReport report;
  report.surface_a = label_a;
  report.surface_b = label_b;
  report.restitution = order_metric(label_a, trials_a, label_b, trials_b,
                                    &SurfaceEstimate::restitution_e);
  report.stiffness_ke = order_metric(label_a, trials_a, label_b, trials_b,
                                     &SurfaceEstimate::stiffness_ke);
  report.deflection = order_metric(label_a, trials_a, label_b, trials_b,
                                   &SurfaceEstimate::deflection_stiffness);

  if (report.restitution.strict && report.deflection.strict &&
      report.restitution.higher == report.deflection.higher) {
    report.verdict = report.restitution.higher + " harder";
  } else {
    report.verdict = "indistinguishable";
  }
  return report;
}

}  // namespace canthex
