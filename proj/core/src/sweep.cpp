#include "relaycap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "relaycap/af_isi.hpp"
#include "relaycap/cutset.hpp"
#include "relaycap/optim.hpp"
#include "relaycap/relaying.hpp"

namespace relaycap {
namespace {

constexpr double kTouchThresholdBits = 1e-3;
constexpr double kCertifySlackBits = 1e-5;

double rho_at(const SweepSpec& spec, std::size_t i) {
  if (spec.steps <= 1) {
    return spec.rho_lo;
  }
  const double t = static_cast<double>(i) / static_cast<double>(spec.steps - 1);
  return spec.rho_lo + t * (spec.rho_hi - spec.rho_lo);
}

void validate_spec(const SweepSpec& spec) {
  if (spec.steps < 1) {
    throw std::invalid_argument("sweep needs at least one step");
  }
  if (!(spec.epsilon > 0.0) || spec.epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (spec.rho_lo > spec.rho_hi) {
    throw std::invalid_argument("rho_lo must not exceed rho_hi");
  }
  const double limit = spec.allow_unit_rho ? 1.0 : 1.0 - spec.epsilon;
  if (spec.rho_lo < -limit || spec.rho_hi > limit) {
    throw std::invalid_argument(
        "rho_z range exceeds |rho_z| <= " + std::to_string(limit) +
        (spec.allow_unit_rho ? "" : "; pass allow_unit_rho to reach +-1"));
  }
  if (spec.curves == 0) {
    throw std::invalid_argument("no curves requested");
  }
}

struct RowResult {
  SweepRow row;
  std::vector<std::string> notes;
};

RowResult compute_row(const SweepSpec& spec, const ChannelParams& gains, double rho) {
  RowResult out;
  out.row.rho_z = rho;
  const ChannelParams p{gains.h_sd, gains.h_sr, gains.h_rd, rho};
  const bool finite_ok = std::abs(rho) <= 1.0 - spec.epsilon;

  const auto guard = [&](const char* column, auto&& fn) -> std::optional<double> {
    try {
      return fn();
    } catch (const std::domain_error& e) {
      std::ostringstream msg;
      msg << "rho_z=" << rho << ": " << column << " skipped: " << e.what();
      out.notes.push_back(msg.str());
      return std::nullopt;
    }
  };
  const auto skip_note = [&](const char* column) {
    std::ostringstream msg;
    msg << "rho_z=" << rho << ": " << column
        << " skipped: |rho_z| beyond the finite-rate clamp";
    out.notes.push_back(msg.str());
  };

  if (has_curve(spec.curves, Curve::CutsetRelaxed)) {
    if (finite_ok) {
      out.row.cutset_relaxed = guard("cutset_relaxed", [&] {
        const auto [ub1, ub2] = relaxed_cutset(p);
        return min(ub1, ub2).bits;
      });
    } else {
      skip_note("cutset_relaxed");
    }
  }
  if (has_curve(spec.curves, Curve::CutsetExact)) {
    if (finite_ok) {
      out.row.cutset_exact =
          guard("cutset_exact", [&] { return exact_cutset(p).exact_bound.bits; });
    } else {
      skip_note("cutset_exact");
    }
  }
  if (has_curve(spec.curves, Curve::Nnc)) {
    if (finite_ok) {
      out.row.nnc =
          guard("nnc", [&] { return nnc_rates(p, q_star(p)).rate.bits; });
    } else {
      skip_note("nnc");
    }
  }
  if (has_curve(spec.curves, Curve::Cf)) {
    if (finite_ok) {
      out.row.cf = guard("cf", [&] { return cf_rate(p).bits; });
    } else {
      skip_note("cf");
    }
  }
  if (has_curve(spec.curves, Curve::Df)) {
    out.row.df = guard("df", [&] { return df_rate(p).bits; });
  }
  if (has_curve(spec.curves, Curve::Af)) {
    out.row.af = guard("af", [&] {
      const IsiChannel ch = build_isi(p);
      if (spec.af_flat) {
        return flat_rate_closed_form(ch).bits;
      }
      return waterfill(ch, spec.af_grid).rate_bits.bits;
    });
  }
  return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  const ChannelParams gains =
      params_from_db(spec.h_sd_db, spec.h_sr_db, spec.h_rd_db, 0.0);

  std::vector<RowResult> results(spec.steps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < spec.steps; i = next.fetch_add(1)) {
      try {
        results[i] = compute_row(spec, gains, rho_at(spec, i));
      } catch (...) {
        std::scoped_lock lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(hw, spec.steps);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::vector<SweepRow> rows;
  rows.reserve(spec.steps);
  for (auto& r : results) {
    for (const auto& note : r.notes) {
      std::fprintf(stderr, "relaycap sweep: %s\n", note.c_str());
    }
    rows.push_back(r.row);
  }
  return rows;
}

namespace {

void append_cell(std::string& out, const std::optional<double>& v) {
  out.push_back(',');
  if (v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *v);
    out += buf;
  }
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) {
    return std::nullopt;
  }
  return std::stod(cell);
}

}  // namespace

std::string csv_from_rows(std::span<const SweepRow> rows) {
  std::string out = "rho_z,cutset_relaxed,cutset_exact,nnc,cf,df,af\n";
  for (const auto& row : rows) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", row.rho_z);
    out += buf;
    append_cell(out, row.cutset_relaxed);
    append_cell(out, row.cutset_exact);
    append_cell(out, row.nnc);
    append_cell(out, row.cf);
    append_cell(out, row.df);
    append_cell(out, row.af);
    out.push_back('\n');
  }
  return out;
}

void emit_csv(std::span<const SweepRow> rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  file << csv_from_rows(rows);
  if (!file) {
    throw std::runtime_error("write failed for " + path);
  }
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty CSV");
  }
  if (line != "rho_z,cutset_relaxed,cutset_exact,nnc,cf,df,af") {
    throw std::runtime_error("unexpected CSV header: " + line);
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    cells.resize(7);
    SweepRow row;
    row.rho_z = std::stod(cells[0]);
    row.cutset_relaxed = parse_cell(cells[1]);
    row.cutset_exact = parse_cell(cells[2]);
    row.nnc = parse_cell(cells[3]);
    row.cf = parse_cell(cells[4]);
    row.df = parse_cell(cells[5]);
    row.af = parse_cell(cells[6]);
    rows.push_back(row);
  }
  return rows;
}

namespace {

struct CurveColumn {
  const char* name;
  const char* color;
  std::optional<double> SweepRow::* field;
};

constexpr CurveColumn kColumns[] = {
    {"cutset_relaxed", "#1f77b4", &SweepRow::cutset_relaxed},
    {"cutset_exact", "#17becf", &SweepRow::cutset_exact},
    {"nnc", "#2ca02c", &SweepRow::nnc},
    {"cf", "#d62728", &SweepRow::cf},
    {"df", "#9467bd", &SweepRow::df},
    {"af", "#ff7f0e", &SweepRow::af},
};

}  // namespace

std::string svg_from_rows(std::span<const SweepRow> rows) {
  constexpr double width = 720.0, height = 480.0;
  constexpr double ml = 70.0, mr = 130.0, mt = 20.0, mb = 50.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool any = false;
  for (const auto& row : rows) {
    for (const auto& col : kColumns) {
      const auto& v = row.*(col.field);
      if (v && std::isfinite(*v)) {
        if (!any) {
          x_lo = x_hi = row.rho_z;
          y_lo = y_hi = *v;
          any = true;
        } else {
          x_lo = std::min(x_lo, row.rho_z);
          x_hi = std::max(x_hi, row.rho_z);
          y_lo = std::min(y_lo, *v);
          y_hi = std::max(y_hi, *v);
        }
      }
    }
  }
  if (x_hi - x_lo < 1e-12) {
    x_hi = x_lo + 1.0;
  }
  if (y_hi - y_lo < 1e-12) {
    y_hi = y_lo + 1.0;
  }
  const auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto sy = [&](double y) {
    return mt + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  constexpr int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / n_ticks;
    const double fy = y_lo + (y_hi - y_lo) * t / n_ticks;
    svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt + plot_h << "\" x2=\""
        << sx(fx) << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(fx) << "\" y=\"" << mt + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fx << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(fy) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fy << "</text>\n";
  }
  svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">rho_z</text>\n";
  svg << "<text x=\"16\" y=\"" << mt + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << mt + plot_h / 2 << ")\">bits / channel use</text>\n";

  int legend_slot = 0;
  for (const auto& col : kColumns) {
    std::ostringstream points;
    bool has_points = false;
    for (const auto& row : rows) {
      const auto& v = row.*(col.field);
      if (v && std::isfinite(*v)) {
        points << sx(row.rho_z) << "," << sy(*v) << " ";
        has_points = true;
      }
    }
    if (!has_points) {
      continue;
    }
    svg << "<polyline fill=\"none\" stroke=\"" << col.color
        << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
    const double ly = mt + 16 + 18 * legend_slot++;
    svg << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
        << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << col.color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << col.name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_svg(std::span<const SweepRow> rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  file << svg_from_rows(rows);
  if (!file) {
    throw std::runtime_error("write failed for " + path);
  }
}

CertifySummary certify_gap(std::size_t n_draws, std::uint64_t seed, double db_lo,
                           double db_hi) {
  if (n_draws < 1) {
    throw std::invalid_argument("certification needs at least one draw");
  }
  if (!(db_lo <= db_hi)) {
    throw std::invalid_argument("dB range is inverted");
  }

  CertifySummary summary;
  summary.n_draws = n_draws;
  summary.threshold_bits = half_log2_3() + kCertifySlackBits;
  summary.max_gap_nnc = -std::numeric_limits<double>::infinity();
  summary.max_gap_cf = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> db(db_lo, db_hi);
  std::uniform_real_distribution<double> rho(-0.999, 0.999);

  for (std::size_t i = 0; i < n_draws; ++i) {
    const double sd = db(rng), sr = db(rng), rd = db(rng);
    const ChannelParams p = params_from_db(sd, sr, rd, rho(rng));
    const auto [ub1, ub2] = relaxed_cutset(p);
    const double cutset = min(ub1, ub2).bits;
    const NncRates nnc = nnc_rates(p, q_star(p));
    const double gap_nnc = cutset - std::min(nnc.r1, nnc.r2);
    const double gap_cf = cutset - cf_rate(p).bits;
    if (gap_nnc > summary.max_gap_nnc) {
      summary.max_gap_nnc = gap_nnc;
      summary.argmax_nnc = p;
    }
    if (gap_cf > summary.max_gap_cf) {
      summary.max_gap_cf = gap_cf;
      summary.argmax_cf = p;
    }
  }
  summary.pass = summary.max_gap_nnc < summary.threshold_bits &&
                 summary.max_gap_cf < summary.threshold_bits;
  return summary;
}

TouchPointResult find_df_touch_point(const SweepSpec& spec, double tol) {
  validate_spec(spec);
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  const ChannelParams gains =
      params_from_db(spec.h_sd_db, spec.h_sr_db, spec.h_rd_db, 0.0);
  const double clamp = 1.0 - spec.epsilon;

  const auto gap_at = [&](double rho) {
    const double r = std::clamp(rho, -clamp, clamp);
    const ChannelParams p{gains.h_sd, gains.h_sr, gains.h_rd, r};
    return exact_cutset(p).exact_bound.bits - df_rate(p).bits;
  };

  // Coarse prescan over the sweep grid, then golden-section refinement in the
  // bracketing cells.
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.steps; ++i) {
    const double g = gap_at(rho_at(spec, i));
    if (g < best_gap) {
      best_gap = g;
      best = i;
    }
  }
  const double lo = rho_at(spec, best == 0 ? 0 : best - 1);
  const double hi = rho_at(spec, std::min(best + 1, spec.steps - 1));

  TouchPointResult result;
  if (hi - lo < tol) {
    result.rho_z = rho_at(spec, best);
    result.gap_bits = best_gap;
  } else {
    const ScalarSearchResult min = golden_section_min(gap_at, lo, hi, tol);
    result.rho_z = min.x;
    result.gap_bits = min.fx;
  }
  result.touched = result.gap_bits < kTouchThresholdBits;
  return result;
}

}  // namespace relaycap
