#include "commtrust/metrics.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "commtrust/error.hpp"

namespace commtrust {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json overhead_json(const OverheadRecord& o) {
  return {{"call_out_bits", o.call_out_bits},
          {"mac_block_bits", o.mac_block_bits},
          {"verification_bits", o.verification_bits},
          {"total_bits", o.total_bits},
          {"payload_bytes", o.payload_bytes},
          {"messages", o.messages},
          {"wire_bytes", o.wire_bytes}};
}

json summary_json(const EventLog& log, const MetricsReport& r) {
  json s;
  s["event_log_digest"] = r.event_log_digest;
  s["events"] = log.size();
  s["retrievals"] = r.retrievals.size();
  s["epochs"] = r.epochs.size();
  s["final_infections"] = r.final_infections();
  if (auto h = r.final_homophily()) {
    s["final_homophily"] = *h;
  } else {
    s["final_homophily"] = nullptr;
  }
  s["acceptance_rate"] = r.acceptance_rate();
  s["tampered_acceptance_rate"] = r.tampered_acceptance_rate();
  s["votes"] = {{"unanimous", r.votes.unanimous},
                {"majority", r.votes.majority},
                {"no_source", r.votes.no_source},
                {"no_majority", r.votes.no_majority}};
  OverheadRecord total;
  for (const auto& rec : r.retrievals) {
    total.call_out_bits += rec.overhead.call_out_bits;
    total.mac_block_bits += rec.overhead.mac_block_bits;
    total.verification_bits += rec.overhead.verification_bits;
    total.total_bits += rec.overhead.total_bits;
    total.payload_bytes += rec.overhead.payload_bytes;
    total.messages += rec.overhead.messages;
    total.wire_bytes += rec.overhead.wire_bytes;
  }
  s["overhead_total"] = overhead_json(total);
  if (r.auth_bound) {
    s["auth_bound"] = {{"verifiers", r.auth_bound->verifiers},
                       {"compromise_p", r.auth_bound->compromise_p},
                       {"trials", r.auth_bound->trials},
                       {"accepted", r.auth_bound->accepted},
                       {"acceptance_rate", r.auth_bound->acceptance_rate()}};
  }
  s["assumptions"] = r.assumptions;
  s["parameters"] = r.parameters_json.empty() ? json::object() : json::parse(r.parameters_json);
  return s;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

OverheadRecord account_overhead(std::span<const Event> trace) {
  OverheadRecord o;
  for (const Event& e : trace) {
    if (!is_message(e.kind)) continue;
    ++o.messages;
    o.wire_bytes += e.wire_bytes;
    o.payload_bytes += e.payload_bytes;
    switch (e.kind) {
      case EventKind::kFingerprintReply:
        o.call_out_bits += e.overhead_bits;
        break;
      case EventKind::kAppDelivery:
        o.mac_block_bits += e.overhead_bits;
        break;
      case EventKind::kVerifyRequest:
      case EventKind::kVerifyReply:
        o.verification_bits += e.overhead_bits;
        break;
      default:
        break;  // call-outs, notices and download requests are not priced
    }
  }
  o.total_bits = o.call_out_bits + o.mac_block_bits + o.verification_bits;
  return o;
}

OverheadRecord bandwidth_estimate(std::uint64_t responders, std::uint64_t macs, int width_bits) {
  const auto w = static_cast<std::uint64_t>(width_bits);
  OverheadRecord o;
  o.call_out_bits = responders * w;
  o.mac_block_bits = macs * w;
  o.verification_bits = 2 * macs * w;
  o.total_bits = o.call_out_bits + o.mac_block_bits + o.verification_bits;
  return o;
}

std::string_view to_string(VoteResult v) {
  switch (v) {
    case VoteResult::kUnanimous: return "unanimous";
    case VoteResult::kMajority: return "majority";
    case VoteResult::kNoSource: return "no-source";
    case VoteResult::kNoMajority: return "no-majority";
  }
  return "unknown";
}

std::string_view to_string(InstallSource s) {
  switch (s) {
    case InstallSource::kNone: return "none";
    case InstallSource::kCommunity: return "community";
    case InstallSource::kStore: return "store";
  }
  return "unknown";
}

double MetricsReport::tampered_acceptance_rate() const {
  if (auth_bound) return auth_bound->acceptance_rate();
  if (retrievals.empty()) return 0.0;
  std::size_t bad = 0;
  for (const auto& r : retrievals) {
    if (r.installed_from == InstallSource::kCommunity && r.installed_tampered) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(retrievals.size());
}

double MetricsReport::acceptance_rate() const {
  if (auth_bound) return auth_bound->acceptance_rate();
  std::size_t decided = 0;
  std::size_t accepted = 0;
  for (const auto& r : retrievals) {
    if (!r.decision) continue;
    ++decided;
    if (r.decision->accepted) ++accepted;
  }
  return decided ? static_cast<double>(accepted) / static_cast<double>(decided) : 0.0;
}

std::size_t MetricsReport::final_infections() const {
  return epochs.empty() ? 0 : epochs.back().infections;
}

std::optional<double> MetricsReport::final_homophily() const {
  return epochs.empty() ? std::nullopt : epochs.back().homophily;
}

std::string epochs_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "epoch,nodes,edges,infections,homophily,retrievals,accepted,rejected,"
        "tampered_accepted,notices,false_accusations,store_refreshes,store_fetches\n";
  for (const auto& e : report.epochs) {
    os << e.epoch << ',' << e.nodes << ',' << e.edges << ',' << e.infections << ','
       << (e.homophily ? fmt_double(*e.homophily) : "") << ',' << e.retrievals << ','
       << e.accepted << ',' << e.rejected << ',' << e.tampered_accepted << ',' << e.notices
       << ',' << e.false_accusations << ',' << e.store_refreshes << ',' << e.store_fetches
       << '\n';
  }
  return os.str();
}

std::string retrievals_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "epoch,requester,app,replies,filtered_old,vote,source,decision,positive,polled,"
        "installed_from,installed_tampered,notices,false_accusations,subjective_trust,"
        "call_out_bits,mac_block_bits,verification_bits,total_bits,payload_bytes\n";
  for (const auto& r : report.retrievals) {
    os << r.epoch << ',' << r.requester << ',' << r.app.label() << ',' << r.replies << ','
       << r.filtered_old << ',' << to_string(r.vote) << ','
       << (r.source ? to_string(*r.source) : "") << ','
       << (r.decision ? to_string(r.decision->reason) : "") << ','
       << (r.decision ? r.decision->positive_verdicts : 0) << ','
       << (r.decision ? r.decision->total_polled : 0) << ',' << to_string(r.installed_from)
       << ',' << (r.installed_tampered ? 1 : 0) << ',' << r.notices << ','
       << r.false_accusations << ','
       << (r.subjective_trust ? fmt_double(*r.subjective_trust) : "") << ','
       << r.overhead.call_out_bits << ',' << r.overhead.mac_block_bits << ','
       << r.overhead.verification_bits << ',' << r.overhead.total_bits << ','
       << r.overhead.payload_bytes << '\n';
  }
  return os.str();
}

std::string metrics_jsonl(const MetricsReport& report) {
  std::string out;
  auto emit = [&](const json& j) {
    out += j.dump();
    out += '\n';
  };
  json meta;
  meta["record"] = "run";
  meta["assumptions"] = report.assumptions;
  meta["parameters"] =
      report.parameters_json.empty() ? json::object() : json::parse(report.parameters_json);
  meta["event_log_digest"] = report.event_log_digest;
  emit(meta);
  for (const auto& r : report.retrievals) {
    json j;
    j["record"] = "retrieval";
    j["epoch"] = r.epoch;
    j["requester"] = r.requester.value;
    j["app"] = r.app.label();
    j["replies"] = r.replies;
    j["filtered_old"] = r.filtered_old;
    j["vote"] = to_string(r.vote);
    j["source"] = r.source ? json(r.source->value) : json(nullptr);
    if (r.decision) {
      j["decision"] = {{"accepted", r.decision->accepted},
                       {"reason", to_string(r.decision->reason)},
                       {"positive_verdicts", r.decision->positive_verdicts},
                       {"total_polled", r.decision->total_polled}};
    } else {
      j["decision"] = nullptr;
    }
    j["installed_from"] = to_string(r.installed_from);
    j["installed_tampered"] = r.installed_tampered;
    j["notices"] = r.notices;
    j["false_accusations"] = r.false_accusations;
    j["subjective_trust"] = r.subjective_trust ? json(*r.subjective_trust) : json(nullptr);
    j["overhead"] = overhead_json(r.overhead);
    emit(j);
  }
  for (const auto& e : report.epochs) {
    json j;
    j["record"] = "epoch";
    j["epoch"] = e.epoch;
    j["nodes"] = e.nodes;
    j["edges"] = e.edges;
    j["infections"] = e.infections;
    j["homophily"] = e.homophily ? json(*e.homophily) : json(nullptr);
    j["retrievals"] = e.retrievals;
    j["accepted"] = e.accepted;
    j["rejected"] = e.rejected;
    j["tampered_accepted"] = e.tampered_accepted;
    j["notices"] = e.notices;
    j["false_accusations"] = e.false_accusations;
    emit(j);
  }
  for (const auto& t : report.trust) {
    emit(json{{"record", "trust"},
              {"epoch", t.epoch},
              {"owner", t.owner.value},
              {"peer", t.peer.value},
              {"resp_prob", t.resp_prob},
              {"cond_trust", t.cond_trust},
              {"combined", t.combined}});
  }
  return out;
}

void write_run_directory(const std::string& dir, const EventLog& log,
                         const MetricsReport& report) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  write_file(root / "events.jsonl", log.to_jsonl());
  write_file(root / "metrics.jsonl", metrics_jsonl(report));
  write_file(root / "epochs.csv", epochs_csv(report));
  write_file(root / "retrievals.csv", retrievals_csv(report));
  write_file(root / "summary.json", summary_json(log, report).dump(2) + "\n");
}

std::string summarize_run_directory(const std::string& dir) {
  const fs::path root(dir);
  json s;
  try {
    s = json::parse(read_file(root / "summary.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, "malformed summary.json in " + dir + ": " + e.what());
  }
  std::ostringstream os;
  const json& params = s["parameters"];
  os << "run:               " << params.value("name", std::string("?")) << " (seed "
     << params.value("seed", 0ull) << ")\n";
  os << "event log digest:  " << s.value("event_log_digest", std::string()) << '\n';
  os << "events:            " << s.value("events", 0ull) << '\n';
  os << "epochs:            " << s.value("epochs", 0ull) << '\n';
  os << "retrievals:        " << s.value("retrievals", 0ull) << '\n';
  os << "final infections:  " << s.value("final_infections", 0ull) << '\n';
  if (s.contains("final_homophily") && !s["final_homophily"].is_null()) {
    os << "final homophily:   " << s["final_homophily"].get<double>() << '\n';
  }
  os << "acceptance rate:   " << s.value("acceptance_rate", 0.0) << '\n';
  os << "tampered accepted: " << s.value("tampered_acceptance_rate", 0.0) << '\n';
  const json& v = s["votes"];
  os << "votes:             unanimous=" << v.value("unanimous", 0ull)
     << " majority=" << v.value("majority", 0ull) << " no-source=" << v.value("no_source", 0ull)
     << " no-majority=" << v.value("no_majority", 0ull) << '\n';
  const json& o = s["overhead_total"];
  os << "overhead bits:     call-out=" << o.value("call_out_bits", 0ull)
     << " mac-block=" << o.value("mac_block_bits", 0ull)
     << " verification=" << o.value("verification_bits", 0ull)
     << " total=" << o.value("total_bits", 0ull) << '\n';
  if (s.contains("auth_bound")) {
    const json& a = s["auth_bound"];
    os << "forged accepted:   " << a.value("accepted", 0ull) << " / " << a.value("trials", 0ull)
       << " (k=" << a.value("verifiers", 0ull) << ", p=" << a.value("compromise_p", 0.0)
       << ")\n";
  }
  if (fs::exists(root / "epochs.csv")) {
    std::istringstream csv(read_file(root / "epochs.csv"));
    std::string line;
    std::getline(csv, line);
    os << "\nper-epoch (epoch,nodes,edges,infections,homophily):\n";
    while (std::getline(csv, line)) {
      std::istringstream cells(line);
      std::string cell;
      std::vector<std::string> parts;
      while (std::getline(cells, cell, ',')) parts.push_back(cell);
      if (parts.size() < 5) continue;
      os << "  " << parts[0] << ',' << parts[1] << ',' << parts[2] << ',' << parts[3] << ','
         << parts[4] << '\n';
    }
  }
  return os.str();
}

}  // namespace commtrust
