#include "specmatch/stats.hpp"

#include <iomanip>
#include <sstream>

#include "specmatch/error.hpp"
#include "specmatch/stability.hpp"

namespace specmatch {

AllocationStats AllocationStats::zero(int provider_count, int user_count) {
  AllocationStats stats;
  stats.provider_count = provider_count;
  stats.user_count = user_count;
  stats.rank_counts.assign(user_count, std::vector<std::uint64_t>(provider_count, 0));
  stats.unmatched_counts.assign(user_count, 0);
  return stats;
}

void AllocationStats::record(const MarketInstance& instance, const Matching& matching) {
  for (int n = 0; n < user_count; ++n) {
    if (const auto rank = rank_of_match(user_id(n), matching, instance)) {
      ++rank_counts[n][*rank - 1];
    } else {
      ++unmatched_counts[n];
    }
  }
  ++instants;
}

double AllocationStats::fraction(int user, int rank) const {
  if (instants == 0) return 0.0;
  return static_cast<double>(rank_counts.at(user).at(rank - 1)) / static_cast<double>(instants);
}

double AllocationStats::unmatched_fraction(int user) const {
  if (instants == 0) return 0.0;
  return static_cast<double>(unmatched_counts.at(user)) / static_cast<double>(instants);
}

AllocationStats merge(const AllocationStats& a, const AllocationStats& b) {
  if (a.provider_count != b.provider_count || a.user_count != b.user_count) {
    throw ShapeMismatch("cannot merge statistics over different market shapes");
  }
  AllocationStats out = a;
  out.instants += b.instants;
  for (int n = 0; n < a.user_count; ++n) {
    for (int i = 0; i < a.provider_count; ++i) out.rank_counts[n][i] += b.rank_counts[n][i];
    out.unmatched_counts[n] += b.unmatched_counts[n];
  }
  return out;
}

namespace {

std::string fraction_text(std::uint64_t count, std::uint64_t total) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6)
      << (total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total));
  return out.str();
}

}  // namespace

std::string report_to_csv(const StatsReport& report) {
  std::ostringstream out;
  out << "su_id,rank,count,fraction\n";
  const AllocationStats& stats = report.stats;
  for (int n = 0; n < stats.user_count; ++n) {
    for (int i = 0; i < stats.provider_count; ++i) {
      out << report.user_names.at(n) << "," << (i + 1) << "," << stats.rank_counts[n][i] << ","
          << fraction_text(stats.rank_counts[n][i], stats.instants) << "\n";
    }
    out << report.user_names.at(n) << ",unmatched," << stats.unmatched_counts[n] << ","
        << fraction_text(stats.unmatched_counts[n], stats.instants) << "\n";
  }
  return out.str();
}

nlohmann::json report_to_json(const StatsReport& report) {
  const AllocationStats& stats = report.stats;
  nlohmann::json users = nlohmann::json::array();
  for (int n = 0; n < stats.user_count; ++n) {
    nlohmann::json ranks = nlohmann::json::array();
    for (int i = 0; i < stats.provider_count; ++i) {
      ranks.push_back({{"rank", i + 1},
                       {"count", stats.rank_counts[n][i]},
                       {"fraction", stats.fraction(n, i + 1)}});
    }
    users.push_back({{"id", report.user_names.at(n)},
                     {"ranks", ranks},
                     {"unmatched",
                      {{"count", stats.unmatched_counts[n]},
                       {"fraction", stats.unmatched_fraction(n)}}}});
  }
  nlohmann::json doc = {{"scenario", report.scenario},
                        {"mode", report.mode},
                        {"instants", stats.instants},
                        {"merged_from", report.merged_from},
                        {"users", users}};
  if (report.seed.has_value()) {
    doc["seed"] = *report.seed;
  } else {
    doc["seed"] = "exhaustive";
  }
  return doc;
}

StatsReport report_from_json(const nlohmann::json& doc) {
  StatsReport report;
  try {
    report.scenario = doc.at("scenario").get<std::string>();
    report.mode = doc.at("mode").get<std::string>();
    report.merged_from = doc.at("merged_from").get<int>();
    if (doc.at("seed").is_string()) {
      if (doc.at("seed").get<std::string>() != "exhaustive") {
        throw ScenarioParseError("report seed must be a number or \"exhaustive\"");
      }
    } else {
      report.seed = doc.at("seed").get<std::uint64_t>();
    }
    const auto& users = doc.at("users");
    const int user_count = static_cast<int>(users.size());
    const int provider_count =
        user_count == 0 ? 0 : static_cast<int>(users.at(0).at("ranks").size());
    report.stats = AllocationStats::zero(provider_count, user_count);
    report.stats.instants = doc.at("instants").get<std::uint64_t>();
    for (int n = 0; n < user_count; ++n) {
      const auto& entry = users.at(n);
      report.user_names.push_back(entry.at("id").get<std::string>());
      const auto& ranks = entry.at("ranks");
      for (int i = 0; i < provider_count; ++i) {
        report.stats.rank_counts[n][i] = ranks.at(i).at("count").get<std::uint64_t>();
      }
      report.stats.unmatched_counts[n] = entry.at("unmatched").at("count").get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioParseError(std::string("malformed stats report: ") + e.what());
  }
  return report;
}

}  // namespace specmatch
