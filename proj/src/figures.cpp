#include "atomex/figures.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <utility>

#include "atomex/asymptotics.hpp"
#include "atomex/optimize.hpp"
#include "atomex/pulse.hpp"

namespace atomex {

namespace {

void run_parallel(std::vector<std::function<void()>> jobs) {
  std::vector<std::future<void>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, std::move(job)));
  for (auto& f : futures) f.get();
}

LossModel loss_at_ratio(double ratio) { return LossModel{ratio, 1.0 - ratio}; }

CsvTable figure_single_photon() {
  std::vector<double> ratios = loss_ratio_grid();
  const size_t n = ratios.size();
  std::vector<double> rising(n), filtered(n), square(n), gauss(n), cavity(n), decaying(n);

  std::vector<std::function<void()>> jobs;
  for (size_t i = 0; i < n; ++i) {
    LossModel loss = loss_at_ratio(ratios[i]);
    FieldSpec field = FieldSpec::fock1();
    jobs.push_back([&rising, i, loss, field] {
      rising[i] = optimize_duration(PulseKind::RisingExp, loss, field).pe_max;
    });
    jobs.push_back([&square, i, loss, field] {
      square[i] = optimize_duration(PulseKind::Square, loss, field).pe_max;
    });
    jobs.push_back([&gauss, i, loss, field] {
      gauss[i] = optimize_duration(PulseKind::Gaussian, loss, field).pe_max;
    });
    jobs.push_back([&decaying, i, loss, field] {
      decaying[i] = optimize_duration(PulseKind::DecayingExp, loss, field).pe_max;
    });
    jobs.push_back([&cavity, i, loss] { cavity[i] = optimize_cavity_shape(loss).pe_max; });
  }
  // The filtered-pulse search is warm-started point to point, so it runs as
  // one sequential job alongside the independent ones.
  jobs.push_back([&filtered, &ratios, n] {
    OptimizationResult prev;
    for (size_t i = 0; i < n; ++i) {
      LossModel loss = loss_at_ratio(ratios[i]);
      prev = i == 0 ? optimize_filtered_gaussian(loss)
                    : optimize_filtered_gaussian(loss, prev.params.at("T"), prev.params.at("g"),
                                                 prev.params.at("kappa"));
      filtered[i] = prev.pe_max;
    }
  });
  run_parallel(std::move(jobs));

  CsvTable table;
  table.header = {"ratio",    "risingexp",    "filtered_gaussian", "square",
                  "gaussian", "cavity_decay", "decayingexp"};
  for (size_t i = 0; i < n; ++i) {
    table.rows.push_back(
        {ratios[i], rising[i], filtered[i], square[i], gauss[i], cavity[i], decaying[i]});
  }
  return table;
}

CsvTable figure_coherent_unit() {
  std::vector<double> ratios = loss_ratio_grid();
  const size_t n = ratios.size();
  const std::vector<PulseKind> kinds = {PulseKind::RisingExp, PulseKind::Square,
                                        PulseKind::Gaussian, PulseKind::DecayingExp};
  std::vector<std::vector<double>> cols(kinds.size(), std::vector<double>(n));

  std::vector<std::function<void()>> jobs;
  for (size_t k = 0; k < kinds.size(); ++k) {
    for (size_t i = 0; i < n; ++i) {
      LossModel loss = loss_at_ratio(ratios[i]);
      PulseKind kind = kinds[k];
      jobs.push_back([&cols, k, i, kind, loss] {
        cols[k][i] = optimize_duration(kind, loss, FieldSpec::coherent(1.0)).pe_max;
      });
    }
  }
  run_parallel(std::move(jobs));

  CsvTable table;
  table.header = {"ratio", "risingexp", "square", "gaussian", "decayingexp"};
  for (size_t i = 0; i < n; ++i) {
    table.rows.push_back({ratios[i], cols[0][i], cols[1][i], cols[2][i], cols[3][i]});
  }
  return table;
}

CsvTable figure_multiphoton(bool fock) {
  LossModel loss{1.0, 0.0};
  const std::vector<PulseKind> kinds = {PulseKind::RisingExp, PulseKind::Square,
                                        PulseKind::Gaussian, PulseKind::DecayingExp};

  std::vector<double> xs;
  std::vector<long> ns;
  if (fock) {
    ns = photon_number_grid_ints();
    for (long v : ns) xs.push_back(static_cast<double>(v));
  } else {
    xs = photon_number_grid();
  }
  const size_t n = xs.size();
  std::vector<std::vector<double>> analytic(kinds.size(), std::vector<double>(n));
  std::vector<std::vector<double>> simulated(kinds.size(), std::vector<double>(n));

  std::vector<std::function<void()>> jobs;
  for (size_t k = 0; k < kinds.size(); ++k) {
    PulseKind kind = kinds[k];
    for (size_t i = 0; i < n; ++i) {
      if (fock) {
        long nn = ns[i];
        jobs.push_back([&analytic, &simulated, k, i, kind, loss, nn] {
          analytic[k][i] = fock_asymptotic_pe(kind, nn, loss);
          simulated[k][i] =
              optimize_duration(kind, loss, FieldSpec::fock(static_cast<int>(nn))).pe_max;
        });
      } else {
        double nbar = xs[i];
        jobs.push_back([&analytic, &simulated, k, i, kind, loss, nbar] {
          analytic[k][i] = coherent_asymptotic_pe(kind, nbar, loss);
          simulated[k][i] = optimize_duration(kind, loss, FieldSpec::coherent(nbar)).pe_max;
        });
      }
    }
  }
  run_parallel(std::move(jobs));

  CsvTable table;
  std::string x_name = fock ? "N" : "nbar";
  table.header = {x_name,
                  "risingexp_analytic",
                  "risingexp_ode",
                  "square_analytic",
                  "square_ode",
                  "gaussian_analytic",
                  "gaussian_ode",
                  "decayingexp_analytic",
                  "decayingexp_ode"};
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> row = {xs[i]};
    for (size_t k = 0; k < kinds.size(); ++k) {
      row.push_back(analytic[k][i]);
      row.push_back(simulated[k][i]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

std::vector<double> loss_ratio_grid() {
  std::vector<double> ratios(21);
  for (int j = 0; j <= 20; ++j) ratios[static_cast<size_t>(j)] = 0.5 + 0.025 * j;
  return ratios;
}

std::vector<double> photon_number_grid() {
  std::vector<double> xs(13);
  for (int j = 0; j <= 12; ++j) xs[static_cast<size_t>(j)] = std::pow(10.0, 0.25 * j);
  return xs;
}

std::vector<long> photon_number_grid_ints() {
  std::vector<long> ns;
  for (double x : photon_number_grid()) {
    long v = std::llround(x);
    if (ns.empty() || ns.back() != v) ns.push_back(v);
  }
  return ns;
}

CsvTable figure_table(int id) {
  switch (id) {
    case 1:
      return figure_single_photon();
    case 2:
      return figure_coherent_unit();
    case 3:
      return figure_multiphoton(false);
    case 4:
      return figure_multiphoton(true);
    default:
      throw std::invalid_argument("figure_table: id must be 1..4");
  }
}

std::string table_to_csv(const CsvTable& table) {
  CsvWriter w(table.header);
  for (const auto& row : table.rows) w.row(row);
  return w.str();
}

}  // namespace atomex
