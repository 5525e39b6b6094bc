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

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

namespace fkpp {

/// CSV cell text; doubles use %.12g, non-finite values print as nan/inf.
inline std::string csv_cell(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
inline std::string csv_cell(const std::string& s) { return s; }
inline std::string csv_cell(const char* s) { return s; }
inline std::string csv_cell(bool b) { return b ? "1" : "0"; }
template <class T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
std::string csv_cell(T x)
{
    return std::to_string(x);
}

/// Writes one '#' metadata line, a header row, then rows.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::string& meta, std::initializer_list<const char*> header)
        : out_(out)
    {
        out_ << "# " << meta << '\n';
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    template <class... Cells>
    void row(const Cells&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << csv_cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

} // namespace fkpp
