#pragma once

#include <string>
#include <vector>

#include "atomex/csv.hpp"

namespace atomex {

// x-axis grids for the shipped result tables.
std::vector<double> loss_ratio_grid();         // 21 points, gamma_p/gamma in [0.5, 1]
std::vector<double> photon_number_grid();      // 13 log-spaced points in [1, 1e3]
std::vector<long> photon_number_grid_ints();   // the same grid rounded to unique integers

// Peak-excitation tables behind the shipped figures:
//  1: optimized single-photon pulse shapes vs loss ratio
//  2: optimized coherent-state (nbar = 1) pulse shapes vs loss ratio
//  3: optimized coherent peaks vs nbar, asymptotic and simulated columns
//  4: optimized N-photon peaks vs N, asymptotic and simulated columns
// Grid points are computed concurrently; rows are assembled in grid order.
CsvTable figure_table(int id);

std::string table_to_csv(const CsvTable& table);

}  // namespace atomex
