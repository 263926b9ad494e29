// JSON serialization for dense matrices.
//
// Matrices are encoded as arrays of rows.  Real entries are plain numbers;
// complex entries are two-element arrays [re, im].  A plain number is also
// accepted where a complex entry is expected and is read with zero
// imaginary part.
#pragma once

#include <json.hpp>

#include <complex>
#include <stdexcept>

#include "wishrisk/cone.hpp"

namespace wishrisk {

inline nlohmann::json matrix_to_json(const RealMatrix& x) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& x) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      row.push_back({x(i, j).real(), x(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline double entry_from_json_real(const nlohmann::json& e) {
  if (!e.is_number()) {
    throw std::invalid_argument(
        "matrix entry must be a number in a real matrix");
  }
  return e.get<double>();
}

inline std::complex<double> entry_from_json_complex(const nlohmann::json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw std::invalid_argument(
      "matrix entry must be a number or a [re, im] pair");
}

template <typename Scalar>
Scalar entry_from_json(const nlohmann::json& e);

template <>
inline double entry_from_json<double>(const nlohmann::json& e) {
  return entry_from_json_real(e);
}

template <>
inline std::complex<double> entry_from_json<std::complex<double>>(
    const nlohmann::json& e) {
  return entry_from_json_complex(e);
}

}  // namespace detail

template <typename Scalar>
DenseMatrix<Scalar> matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("matrix must be a non-empty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw std::invalid_argument("matrix rows must be non-empty arrays");
  }
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  DenseMatrix<Scalar> x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() ||
        static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix rows must all have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      x(i, c) = detail::entry_from_json<Scalar>(row[static_cast<std::size_t>(c)]);
    }
  }
  return x;
}

}  // namespace wishrisk
