/*
 * Copyright (C) 2026 The loomcas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#pragma once

#include <stdexcept>
#include <string>

namespace loomcas {

// Non-finite or out-of-domain numeric input.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Robot and obstacle occupy the same point (rho == 0).
class CoincidenceError : public DomainError
{
public:
  using DomainError::DomainError;
};

// Malformed or invalid configuration (bad JSON, unknown policy id, violated type invariants).
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Scenario whose initial state already lies inside the avoidance set.
class RejectedScenario : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Not enough samples for a finite-difference check.
class InsufficientData : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// theta_dot == 0 in the retinal time-to-collision estimate.
class UndefinedTtc : public DomainError
{
public:
  using DomainError::DomainError;
};

} // namespace loomcas
