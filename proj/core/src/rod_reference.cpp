#include <algorithm>
#include <queue>
#include <vector>

#include "mixpade/errors.hpp"
#include "mixpade/problems.hpp"

namespace mixpade {

namespace {

// A stress discontinuity travelling through one segment. Velocity jump
// across it is -direction * dsigma / Z.
struct Front {
  double arrival;  // time it reaches the end of its segment
  int segment;     // 0 left, 1 right
  int direction;   // +1 towards larger x
  double dsigma;
};

struct Later {
  bool operator()(const Front& a, const Front& b) const { return a.arrival > b.arrival; }
};

}  // namespace

std::vector<double> bimaterial_interface_velocity(const std::vector<double>& t,
                                                  const BimaterialParams& p) {
  if (!std::is_sorted(t.begin(), t.end())) {
    throw ParameterError("bimaterial_interface_velocity needs ascending times");
  }
  std::vector<double> out(t.size(), 0.0);
  if (t.empty() || t.back() < 0.0) return out;

  const double z[2] = {p.density_left * p.c_left, p.density_right * p.c_right};
  const double transit[2] = {p.segment_length / p.c_left, p.segment_length / p.c_right};
  const double t_max = t.back();
  const double cutoff = 1e-13 * std::abs(p.load);
  constexpr std::size_t kMaxEvents = 50'000'000;

  std::priority_queue<Front, std::vector<Front>, Later> queue;
  queue.push({transit[1], 1, -1, p.load});

  struct Jump {
    double time;
    double dv;
  };
  std::vector<Jump> jumps;
  std::size_t events = 0;

  while (!queue.empty() && queue.top().arrival <= t_max) {
    const Front f = queue.top();
    queue.pop();
    if (++events > kMaxEvents) {
      throw NumericalError("bi-material reference: too many wavefronts before t_max");
    }
    const bool at_interface = (f.segment == 0 && f.direction > 0) || (f.segment == 1 && f.direction < 0);
    if (at_interface) {
      const int other = 1 - f.segment;
      const double za = z[f.segment];
      const double zb = z[other];
      const double transmitted = 2.0 * zb / (za + zb) * f.dsigma;
      const double reflected = (zb - za) / (za + zb) * f.dsigma;
      jumps.push_back({f.arrival, -f.direction * transmitted / zb});
      if (std::abs(reflected) > cutoff) {
        queue.push({f.arrival + transit[f.segment], f.segment, -f.direction, reflected});
      }
      if (std::abs(transmitted) > cutoff) {
        queue.push({f.arrival + transit[other], other, f.direction, transmitted});
      }
    } else if (f.segment == 0) {
      // Fixed end: velocity held at zero, stress jump reflects unchanged.
      queue.push({f.arrival + transit[0], 0, +1, f.dsigma});
    } else {
      // Loaded end: traction held, stress jump reflects with opposite sign.
      queue.push({f.arrival + transit[1], 1, -1, -f.dsigma});
    }
  }

  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
  double v = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (j < jumps.size() && jumps[j].time <= t[i]) v += jumps[j++].dv;
    out[i] = v;
  }
  return out;
}

}  // namespace mixpade
