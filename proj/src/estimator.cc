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

#include "effchsh/estimator.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace effchsh {

namespace {

constexpr std::array<Outcome, 2> kDetected = {Outcome::Plus, Outcome::Minus};

const char *outcome_text(Outcome o) {
    switch (o) {
        case Outcome::Plus:
            return "+1";
        case Outcome::Minus:
            return "-1";
        case Outcome::NoDetect:
            return "0";
    }
    return "?";
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<Outcome> parse_outcome(const std::string &s) {
    if (s == "+1" || s == "1") {
        return Outcome::Plus;
    }
    if (s == "-1") {
        return Outcome::Minus;
    }
    if (s == "0") {
        return Outcome::NoDetect;
    }
    return std::nullopt;
}

std::optional<PairIndex> parse_pair(const std::string &s) {
    for (PairIndex p : kAllPairs) {
        if (s == pair_label(p)) {
            return p;
        }
    }
    return std::nullopt;
}

}  // namespace

std::uint64_t CountsRecord::coincidences() const {
    std::uint64_t total = 0;
    for (Outcome r : kDetected) {
        for (Outcome q : kDetected) {
            total += count(r, q);
        }
    }
    return total;
}

std::uint64_t CountsRecord::table_sum() const {
    std::uint64_t total = 0;
    for (const auto &row : n) {
        for (std::uint64_t c : row) {
            total += c;
        }
    }
    return total;
}

void CountsRecord::validate() const {
    if (emitted_total && *emitted_total != table_sum()) {
        throw ValidationError(std::string("pair ") + pair_label(pair) + ": table sums to " +
                              std::to_string(table_sum()) + " but emitted total is " +
                              std::to_string(*emitted_total));
    }
}

EffEstimate estimate_e_eff(const CountsRecord &rec) {
    std::uint64_t nc = rec.coincidences();
    if (nc == 0) {
        throw NoDataError(std::string("pair ") + pair_label(rec.pair) + " has no coincidences");
    }
    double same = static_cast<double>(rec.count(Outcome::Plus, Outcome::Plus) + rec.count(Outcome::Minus, Outcome::Minus));
    double diff = static_cast<double>(rec.count(Outcome::Plus, Outcome::Minus) + rec.count(Outcome::Minus, Outcome::Plus));
    EffEstimate est;
    est.coincidences = nc;
    est.e_eff = (same - diff) / static_cast<double>(nc);
    est.std_error = std::sqrt(std::max(0.0, 1.0 - est.e_eff * est.e_eff) / static_cast<double>(nc));
    return est;
}

double e_eff_from_counts(const CountsRecord &rec) { return estimate_e_eff(rec).e_eff; }

UEffEstimate u_eff_from_counts(RecordQuad recs) {
    UEffEstimate out;
    double var = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        out.per_pair[i] = estimate_e_eff(recs[i]);
        out.u_eff += kChshSigns[i] * out.per_pair[i].e_eff;
        var += out.per_pair[i].std_error * out.per_pair[i].std_error;
    }
    out.std_error = std::sqrt(var);
    return out;
}

EpsilonReport epsilon_decomposition(RecordQuad recs) {
    EpsilonReport rep;
    for (std::size_t i = 0; i < 4; ++i) {
        const CountsRecord &rec = recs[i];
        if (!rec.emitted_total) {
            throw UnavailableError(std::string("pair ") + pair_label(rec.pair) +
                                   ": emitted total unknown; epsilon cannot be determined from coincidences alone");
        }
        rec.validate();
        EffEstimate est = estimate_e_eff(rec);
        double total = static_cast<double>(*rec.emitted_total);
        double same = static_cast<double>(rec.count(Outcome::Plus, Outcome::Plus) + rec.count(Outcome::Minus, Outcome::Minus));
        double diff = static_cast<double>(rec.count(Outcome::Plus, Outcome::Minus) + rec.count(Outcome::Minus, Outcome::Plus));
        double e = (same - diff) / total;
        double s = static_cast<double>(est.coincidences) / total;
        rep.correlation[i] = e;
        rep.coincidence_fraction[i] = s;
        rep.e_eff[i] = est.e_eff;
        rep.eps[i] = e * (1.0 - s) / s;
        rep.eps_total += kChshSigns[i] * rep.eps[i];
        rep.U += kChshSigns[i] * e;
        rep.U_eff += kChshSigns[i] * est.e_eff;
    }
    rep.lower = -2.0 + rep.eps_total;
    rep.upper = 2.0 + rep.eps_total;
    rep.within_interval = rep.U_eff > rep.lower && rep.U_eff < rep.upper;
    return rep;
}

double qm_epsilon_identity(const QMModelParams &params, double u_eff) { return (1.0 - params.pair_detection()) * u_eff; }

void write_counts_csv(std::ostream &os, RecordQuad recs) {
    os << "pair_label,r,q,count\n";
    for (const CountsRecord &rec : recs) {
        for (Outcome r : kAllOutcomes) {
            for (Outcome q : kAllOutcomes) {
                os << pair_label(rec.pair) << ',' << outcome_text(r) << ',' << outcome_text(q) << ','
                   << rec.count(r, q) << '\n';
            }
        }
    }
}

std::array<CountsRecord, 4> read_counts_csv(std::istream &is) {
    std::array<CountsRecord, 4> recs;
    std::array<std::array<std::array<bool, 3>, 3>, 4> seen{};
    std::string line;
    if (!std::getline(is, line) || trim(line) != "pair_label,r,q,count") {
        throw InputError("counts CSV: missing header 'pair_label,r,q,count'");
    }
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cols.push_back(trim(cell));
        }
        auto fail = [&](const std::string &what) {
            throw InputError("counts CSV line " + std::to_string(line_no) + ": " + what);
        };
        if (cols.size() != 4) {
            fail("expected 4 columns");
        }
        auto pair = parse_pair(cols[0]);
        if (!pair) {
            fail("unknown pair label '" + cols[0] + "'");
        }
        auto r = parse_outcome(cols[1]);
        auto q = parse_outcome(cols[2]);
        if (!r || !q) {
            fail("outcomes must be +1, -1 or 0");
        }
        if (cols[3].empty() || cols[3].find_first_not_of("0123456789") != std::string::npos) {
            fail("count must be a nonnegative integer");
        }
        std::uint64_t value = 0;
        try {
            value = std::stoull(cols[3]);
        } catch (const std::exception &) {
            fail("count out of range");
        }
        auto pi = static_cast<std::size_t>(*pair);
        auto ri = static_cast<std::size_t>(*r);
        auto qi = static_cast<std::size_t>(*q);
        if (seen[pi][ri][qi]) {
            fail("duplicate cell");
        }
        seen[pi][ri][qi] = true;
        recs[pi].count(*r, *q) = value;
    }
    for (PairIndex p : kAllPairs) {
        auto pi = static_cast<std::size_t>(p);
        recs[pi].pair = p;
        bool all = true;
        for (Outcome r : kAllOutcomes) {
            for (Outcome q : kAllOutcomes) {
                bool s = seen[pi][static_cast<std::size_t>(r)][static_cast<std::size_t>(q)];
                all = all && s;
                if (!s && r != Outcome::NoDetect && q != Outcome::NoDetect) {
                    throw InputError(std::string("counts CSV: pair ") + pair_label(p) + " lacks the (" +
                                     outcome_text(r) + ", " + outcome_text(q) + ") cell");
                }
            }
        }
        if (all) {
            recs[pi].emitted_total = recs[pi].table_sum();
        }
    }
    return recs;
}

nlohmann::json analysis_json(RecordQuad recs) {
    UEffEstimate u = u_eff_from_counts(recs);
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json per = nlohmann::json::object();
    for (std::size_t i = 0; i < 4; ++i) {
        nlohmann::json p = {{"E_eff", u.per_pair[i].e_eff},
                            {"stderr", u.per_pair[i].std_error},
                            {"coincidences", u.per_pair[i].coincidences}};
        if (recs[i].emitted_total) {
            p["emitted_total"] = *recs[i].emitted_total;
        }
        if (recs[i].settings) {
            p["a_deg"] = recs[i].settings->first.deg();
            p["b_deg"] = recs[i].settings->second.deg();
        }
        per[pair_label(recs[i].pair)] = p;
    }
    j["per_pair"] = per;
    j["U_eff"] = u.u_eff;
    j["stderr"] = u.std_error;
    j["stderr_model"] = "independent trials, plug-in binomial variance per term, combined in quadrature";
    nlohmann::json verdicts;
    verdicts["abs_U_eff_le_2"] = std::fabs(u.u_eff) <= 2.0;
    verdicts["sigmas_above_2"] = u.std_error > 0.0 ? (std::fabs(u.u_eff) - 2.0) / u.std_error : 0.0;
    try {
        EpsilonReport eps = epsilon_decomposition(recs);
        j["epsilon"] = {{"eps_ab", eps.eps[0]},
                        {"eps_ab'", eps.eps[1]},
                        {"eps_a'b", eps.eps[2]},
                        {"eps_a'b'", eps.eps[3]},
                        {"eps_total", eps.eps_total},
                        {"U", eps.U},
                        {"interval", {eps.lower, eps.upper}},
                        {"U_eff_within_interval", eps.within_interval}};
        verdicts["abs_U_le_2"] = std::fabs(eps.U) <= 2.0;
    } catch (const UnavailableError &e) {
        j["epsilon"] = "unavailable";
        j["epsilon_note"] = e.what();
    }
    j["verdicts"] = verdicts;
    return j;
}

}  // namespace effchsh
