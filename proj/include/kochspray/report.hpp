#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace kochspray {

// JSON writer that keeps insertion order and prints every real with 17
// significant digits (nlohmann's dump uses the shortest round-trip form).
void write_json(std::ostream& out, const nlohmann::ordered_json& j, int indent = 2);

// RFC 4180: quote fields containing comma, quote, CR or LF; double inner quotes.
std::string csv_field(const std::string& s);
std::string csv_real(double x);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& s);
  CsvWriter& operator<<(const char* s) { return *this << std::string(s); }
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(int x);
  CsvWriter& operator<<(long long x);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool row_started_{false};
};

}  // namespace kochspray
