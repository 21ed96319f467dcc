#pragma once

#include <stdexcept>
#include <string>

namespace tto {

// Input or value violates a documented invariant (bad zero, bad grid size,
// malformed config). The CLI maps these to exit code 2.
class invariant_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical precondition failed while computing (pole proximity, root
// finding breakdown, singular denominator, coincident Clark atoms, ...).
// The CLI maps these to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class pole_proximity_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class root_finding_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class positivity_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class degenerate_input_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class degenerate_parameter_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class singular_denominator_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class multiple_root_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class precondition_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class basis_mismatch_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tto
