// Copyright 2026 The effchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "effchsh/angle.h"

#include <sstream>
#include <vector>

namespace effchsh {

SettingsQuad parse_quad(const std::string &text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            throw InputError("quad: cannot parse '" + item + "' as degrees");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw InputError("quad: trailing characters in '" + item + "'");
        }
        values.push_back(v);
    }
    if (values.size() != 4) {
        throw InputError("quad: expected four comma-separated angles \"a,a',b,b'\" in degrees");
    }
    return SettingsQuad::degrees(values[0], values[1], values[2], values[3]);
}

}  // namespace effchsh
