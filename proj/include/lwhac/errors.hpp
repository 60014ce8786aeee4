#pragma once

#include <stdexcept>

namespace lwhac {

// Malformed or invalid input data (bad CSV, NaN/negative distances, asymmetry).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken protocol invariant between workers: missing triple, mismatched
// combine, no alive cells while iterations remain, deadlock.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Use of a closed transport or an invalid endpoint.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lwhac
