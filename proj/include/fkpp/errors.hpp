/*
   Copyright 2026 The fkpp-qsd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace fkpp {

/// Argument outside the mathematical domain of a routine.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rejected configuration (bad keys, unstable discretization, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Operation applied to a state it does not make sense for.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Survival curve has too few usable points for a rate fit.
class FitWindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every replica of an interacting ensemble absorbed at once.
class EnsembleCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fkpp
