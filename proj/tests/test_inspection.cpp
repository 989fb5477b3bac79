#include <cmath>
#include <vector>

#include <doctest.h>

#include "canthex/errors.hpp"
#include "canthex/inspection.hpp"
#include "canthex/trajectory_log.hpp"

using namespace canthex;

namespace {

constexpr double kDt = 1e-3;

void push_sample(TrajectoryLog& log, double t, double v_normal, double force,
                 double penetration) {
  SimSample sample;
  sample.t = t;
  sample.vel_normal = v_normal;
  sample.force_sensed = force;
  sample.in_contact = force > 0.0;
  sample.penetration = penetration;
  log.append(sample);
}

/// Canonical synthetic bounce: 100 ms approach at +0.2 m/s, 50 ms of contact
/// at 1 N with a 5 mm peak deflection, then a long rebound at -0.14 m/s.
TrajectoryLog synthetic_bounce(double v_in = 0.2, double v_out = 0.14,
                               int contact_ticks = 50) {
  LogHeader header;
  header.scenario = "synthetic";
  header.dt = kDt;
  TrajectoryLog log(header);

  int tick = 0;
  for (int i = 0; i < 100; ++i, ++tick) {
    push_sample(log, tick * kDt, v_in, 0.0, 0.0);
  }
  for (int i = 0; i < contact_ticks; ++i, ++tick) {
    const double hump =
        std::sin(kPi * (i + 1) / static_cast<double>(contact_ticks + 1));
    push_sample(log, tick * kDt, 0.05, 1.0, 0.005 * hump);
  }
  for (int i = 0; i < 300; ++i, ++tick) {
    push_sample(log, tick * kDt, -v_out, 0.0, 0.0);
  }
  return log;
}

ImpactEpisode canonical_episode() {
  ImpactEpisode episode;
  episode.t_contact = 0.1;
  episode.t_separation = 0.15;
  episode.approach_velocity = 0.2;
  episode.rebound_velocity = 0.14;
  episode.contact_duration = 0.05;
  episode.peak_force = 1.0;
  episode.max_penetration = 0.005;
  episode.complete = true;
  return episode;
}

SurfaceEstimate fake_estimate(double e, double ke, double deflection) {
  SurfaceEstimate est;
  est.restitution_e = e;
  est.stiffness_ke = ke;
  est.deflection_stiffness = deflection;
  return est;
}

}  // namespace

TEST_CASE("batch detection recovers the constructed episode exactly") {
  const TrajectoryLog log = synthetic_bounce();
  const ImpactEpisode episode = detect_episode(log);

  CHECK(episode.complete);
  // Approach velocity: mean of the 50 ms window before the crossing, all
  // samples at exactly 0.2.
  CHECK(episode.approach_velocity == doctest::Approx(0.2).epsilon(1e-12));
  // Rebound: peak outward speed in the post-separation window.
  CHECK(episode.rebound_velocity == doctest::Approx(0.14).epsilon(1e-12));
  CHECK(episode.contact_duration == doctest::Approx(0.05).epsilon(2e-2));
  CHECK(episode.peak_force == doctest::Approx(1.0).epsilon(1e-12));
  // Largest sample the hump actually produced (50 ticks never sample the
  // exact crest of the sine).
  const double fed_max = 0.005 * std::sin(kPi * 25.0 / 51.0);
  CHECK(episode.max_penetration == doctest::Approx(fed_max).epsilon(1e-12));
  CHECK(episode.t_contact == doctest::Approx(0.100).epsilon(1e-6));
}

TEST_CASE("streaming feed and batch replay agree sample for sample") {
  const TrajectoryLog log = synthetic_bounce();

  EpisodeDetector detector;
  for (std::size_t i = 0; i < log.row_count(); ++i) {
    detector.feed(log.at(i, "t"), log.at(i, "vel_normal"),
                  log.at(i, "force_sensed"), log.at(i, "penetration"));
  }
  detector.finish(log.at(log.row_count() - 1, "t"));
  REQUIRE(detector.episodes().size() == 1);

  const ImpactEpisode streamed = detector.episodes()[0];
  const ImpactEpisode batch = detect_episode(log);
  CHECK(streamed.t_contact == batch.t_contact);
  CHECK(streamed.t_separation == batch.t_separation);
  CHECK(streamed.approach_velocity == batch.approach_velocity);
  CHECK(streamed.rebound_velocity == batch.rebound_velocity);
  CHECK(streamed.max_penetration == batch.max_penetration);
  CHECK(streamed.complete == batch.complete);
}

TEST_CASE("no contact means no episode") {
  LogHeader header;
  header.dt = kDt;
  TrajectoryLog log(header);
  for (int i = 0; i < 500; ++i) {
    push_sample(log, i * kDt, 0.2, 0.0, 0.0);
  }
  CHECK_THROWS_AS(detect_episode(log), NoEpisode);
}

TEST_CASE("an unfinished touch is not a complete episode") {
  LogHeader header;
  header.dt = kDt;
  TrajectoryLog log(header);
  int tick = 0;
  for (int i = 0; i < 100; ++i, ++tick) push_sample(log, tick * kDt, 0.2, 0.0, 0.0);
  for (int i = 0; i < 50; ++i, ++tick) push_sample(log, tick * kDt, 0.0, 1.0, 0.003);
  // Log ends while still pressed against the surface.
  CHECK_THROWS_AS(detect_episode(log), NoEpisode);
}

TEST_CASE("two bounces are refused in the single-episode path") {
  LogHeader header;
  header.dt = kDt;
  TrajectoryLog log(header);
  int tick = 0;
  for (int bounce = 0; bounce < 2; ++bounce) {
    for (int i = 0; i < 300; ++i, ++tick) push_sample(log, tick * kDt, 0.2, 0.0, 0.0);
    for (int i = 0; i < 50; ++i, ++tick) push_sample(log, tick * kDt, 0.05, 1.0, 0.004);
    for (int i = 0; i < 300; ++i, ++tick) push_sample(log, tick * kDt, -0.1, 0.0, 0.0);
  }
  CHECK_THROWS_AS(detect_episode(log), MultipleEpisodes);
}

TEST_CASE("restitution estimate is the speed ratio") {
  ImpactEpisode episode = canonical_episode();
  bool clamped = true;
  CHECK(estimate_restitution(episode, &clamped) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_FALSE(clamped);

  episode.approach_velocity = 0.2;
  episode.rebound_velocity = 0.143;
  CHECK(estimate_restitution(episode) == doctest::Approx(0.715).epsilon(1e-12));
}

TEST_CASE("unphysical rebound is clamped and flagged") {
  ImpactEpisode episode = canonical_episode();
  episode.rebound_velocity = 0.25; // faster out than in
  bool clamped = false;
  CHECK(estimate_restitution(episode, &clamped) == doctest::Approx(1.0));
  CHECK(clamped);
}

TEST_CASE("zero approach velocity cannot be inverted") {
  ImpactEpisode episode = canonical_episode();
  episode.approach_velocity = 0.0;
  CHECK_THROWS_AS(estimate_restitution(episode), ZeroApproach);
}

TEST_CASE("stiffness estimators on the canonical episode") {
  const ImpactEpisode episode = canonical_episode();
  const double mass = 2.5;
  const SurfaceEstimate est = estimate_stiffness(episode, mass, 500.0);

  // Rebound kinetic energy: 0.5 * 2.5 * 0.14^2 = 0.0245 J.
  CHECK(est.stiffness_kt == doctest::Approx(0.0245).epsilon(1e-12));
  // Approach kinetic energy: 0.5 * 2.5 * 0.04 = 0.05 J.
  CHECK(est.kinetic_approach == doctest::Approx(0.05).epsilon(1e-12));
  // Series transfer: Ku*Kt / (Ku - Kt).
  const double expected_ke = 500.0 * 0.0245 / (500.0 - 0.0245);
  CHECK(est.stiffness_ke == doctest::Approx(expected_ke).epsilon(1e-12));
  // Deflection estimate: m v_i^2 / delta^2 = 2.5 * 0.04 / 2.5e-5 = 4000 N/m.
  CHECK(est.deflection_stiffness == doctest::Approx(4000.0).epsilon(1e-12));
  CHECK(est.restitution_e == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("series transfer limits behave") {
  ImpactEpisode episode = canonical_episode();

  // Huge tool stiffness: the series estimate collapses onto K_t.
  SurfaceEstimate est = estimate_stiffness(episode, 2.5, 1e9);
  CHECK(est.stiffness_ke == doctest::Approx(est.stiffness_kt).epsilon(1e-3));

  // Ku exactly twice Kt doubles the estimate.
  const double kt = 0.5 * 2.5 * 0.14 * 0.14;
  est = estimate_stiffness(episode, 2.5, 2.0 * kt);
  CHECK(est.stiffness_ke == doctest::Approx(2.0 * kt).epsilon(1e-9));

  // Ku == Kt sits on the pole.
  CHECK_THROWS_AS(estimate_stiffness(episode, 2.5, kt), SeriesPole);
}

TEST_CASE("classification separates well-spread groups") {
  std::vector<SurfaceEstimate> stiff = {
      fake_estimate(0.68, 800.0, 900.0), fake_estimate(0.72, 820.0, 950.0),
      fake_estimate(0.70, 790.0, 930.0), fake_estimate(0.69, 815.0, 910.0)};
  std::vector<SurfaceEstimate> soft = {
      fake_estimate(0.31, 150.0, 200.0), fake_estimate(0.29, 140.0, 190.0),
      fake_estimate(0.33, 160.0, 205.0), fake_estimate(0.30, 145.0, 195.0)};

  const ClassificationReport report =
      classify_surfaces("s1_stiff", stiff, "s2_soft", soft);
  CHECK(report.restitution.strict);
  CHECK(report.restitution.higher == "s1_stiff");
  CHECK(report.stiffness_ke.strict);
  CHECK(report.deflection.strict);
  CHECK(report.verdict == "s1_stiff harder");
  CHECK(report.restitution.mean_a == doctest::Approx(0.6975));
  CHECK(report.restitution.pooled_sd > 0.0);
}

TEST_CASE("symmetric inputs swap the verdict, not the logic") {
  std::vector<SurfaceEstimate> stiff = {fake_estimate(0.7, 800.0, 900.0),
                                        fake_estimate(0.7, 810.0, 920.0)};
  std::vector<SurfaceEstimate> soft = {fake_estimate(0.3, 150.0, 200.0),
                                       fake_estimate(0.3, 140.0, 195.0)};
  const ClassificationReport report =
      classify_surfaces("soft", soft, "stiff", stiff);
  CHECK(report.verdict == "stiff harder");
}

TEST_CASE("overlapping groups are indistinguishable") {
  std::vector<SurfaceEstimate> a = {fake_estimate(0.50, 400.0, 500.0),
                                    fake_estimate(0.60, 500.0, 600.0),
                                    fake_estimate(0.40, 300.0, 400.0)};
  std::vector<SurfaceEstimate> b = {fake_estimate(0.52, 420.0, 520.0),
                                    fake_estimate(0.48, 380.0, 480.0),
                                    fake_estimate(0.55, 450.0, 550.0)};
  const ClassificationReport report = classify_surfaces("a", a, "b", b);
  CHECK_FALSE(report.restitution.strict);
  CHECK(report.verdict == "indistinguishable");
}

TEST_CASE("disagreeing metrics refuse a verdict") {
  // Restitution says a, deflection says b: no call is made.
  std::vector<SurfaceEstimate> a = {fake_estimate(0.70, 800.0, 200.0),
                                    fake_estimate(0.71, 810.0, 195.0)};
  std::vector<SurfaceEstimate> b = {fake_estimate(0.30, 150.0, 900.0),
                                    fake_estimate(0.29, 140.0, 920.0)};
  const ClassificationReport report = classify_surfaces("a", a, "b", b);
  CHECK(report.restitution.strict);
  CHECK(report.deflection.strict);
  CHECK(report.restitution.higher != report.deflection.higher);
  CHECK(report.verdict == "indistinguishable");
}

TEST_CASE("classification needs two trials per surface") {
  std::vector<SurfaceEstimate> one = {fake_estimate(0.7, 800.0, 900.0)};
  std::vector<SurfaceEstimate> two = {fake_estimate(0.3, 150.0, 200.0),
                                      fake_estimate(0.3, 140.0, 195.0)};
  CHECK_THROWS_AS(classify_surfaces("a", one, "b", two), InsufficientTrials);
  CHECK_THROWS_AS(classify_surfaces("a", two, "b", one), InsufficientTrials);
}
