#include "flowtrap/audit.hpp"

#include <json.hpp>

#include "flowtrap/error.hpp"

namespace flowtrap {

using nlohmann::json;

namespace {

json cert_json(const FaceCertificate& c) {
  return json{{"status", to_string(c.status)}, {"level_c", c.level_c},   {"delta", c.delta},
              {"net_min", c.net_min},          {"net_argmin", c.net_argmin}, {"distance", c.distance},
              {"pivot_value", c.pivot_value}};
}

FaceCertificate cert_from(const json& j) {
  FaceCertificate c;
  const auto status = cert_status_from_string(j.at("status").get<std::string>());
  if (!status) fail(ErrorCode::InvalidArgument, "audit: unknown certificate status");
  c.status = *status;
  c.level_c = j.at("level_c").get<double>();
  c.delta = j.at("delta").get<double>();
  c.net_min = j.at("net_min").get<double>();
  c.net_argmin = j.at("net_argmin").get<Point>();
  c.distance = j.at("distance").get<double>();
  c.pivot_value = j.at("pivot_value").get<double>();
  return c;
}

}  // namespace

std::string audit_line(const StepRecord& rec) {
  json certs = json::array();
  for (const auto& c : rec.domain.certs) certs.push_back(cert_json(c));
  json j{{"step", rec.step},
         {"subroutine", rec.subroutine},
         {"rect", {{"lo", rec.domain.rect.lo()}, {"hi", rec.domain.rect.hi()}}},
         {"pivot", rec.domain.pivot},
         {"pivot_value", rec.domain.pivot_value},
         {"delta", rec.delta},
         {"eps_t", rec.domain.epsilon_t},
         {"k", rec.k},
         {"certs", std::move(certs)},
         {"ledger",
          {{"value_queries", rec.ledger.value_queries},
           {"gradient_queries", rec.ledger.gradient_queries},
           {"depth_rounds", rec.ledger.depth_rounds}}}};
  return j.dump();
}

StepRecord parse_audit_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("audit: malformed JSON: ") + e.what());
  }
  try {
    const auto& l = j.at("ledger");
    StepRecord rec{j.at("step").get<std::size_t>(),
                   j.at("subroutine").get<std::string>(),
                   Domain{HyperRect(j.at("rect").at("lo").get<Point>(), j.at("rect").at("hi").get<Point>()),
                          j.at("pivot").get<Point>(), j.at("pivot_value").get<double>(), {},
                          j.at("eps_t").get<double>()},
                   j.at("delta").get<double>(),
                   j.at("k").get<std::size_t>(),
                   {l.at("value_queries").get<std::uint64_t>(), l.at("gradient_queries").get<std::uint64_t>(),
                    l.at("depth_rounds").get<std::uint64_t>()}};
    for (const auto& c : j.at("certs")) rec.domain.certs.push_back(cert_from(c));
    return rec;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("audit: missing or mistyped field: ") + e.what());
  }
}

ReplayResult replay_record(const StepRecord& rec) {
  ReplayResult r;
  r.faces_checked = rec.domain.certs.size();
  std::string why;
  if (!domain_certified(rec.domain, &why)) {
    r.message = "step " + std::to_string(rec.step) + ": " + why;
    return r;
  }
  if (!pivot_not_on_new_boundary(rec.domain)) {
    r.message = "step " + std::to_string(rec.step) + ": pivot lies on an interior face";
    return r;
  }
  r.ok = true;
  return r;
}

ReplayResult replay_audit_line(const std::string& line) { return replay_record(parse_audit_line(line)); }

}  // namespace flowtrap
