#include "kochspray/report.hpp"

#include <cmath>
#include <cstdio>

namespace kochspray {

namespace {

void write_value(std::ostream& out, const nlohmann::ordered_json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << nlohmann::ordered_json(it.key()).dump() << colon;
        write_value(out, it.value(), indent, level + 1);
      }
      out << nl << close << '}';
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ',' << nl;
        out << pad;
        write_value(out, j[i], indent, level + 1);
      }
      out << nl << close << ']';
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no inf / nan
      if (!std::isfinite(x)) {
        out << "null";
      } else {
        out << csv_real(x);
      }
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const nlohmann::ordered_json& j, int indent) {
  write_value(out, j, indent, 0);
  out << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string csv_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::sep() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  sep();
  out_ << csv_field(s);
  return *this;
}

CsvWriter& CsvWriter::operator<<(double x) {
  sep();
  out_ << csv_real(x);
  return *this;
}

CsvWriter& CsvWriter::operator<<(int x) {
  sep();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long x) {
  sep();
  out_ << x;
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\r\n";
  row_started_ = false;
}

}  // namespace kochspray
