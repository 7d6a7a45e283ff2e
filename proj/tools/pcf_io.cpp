#include "pcf_io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace mpcf::io {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Parse, path.string() + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <Scalar T>
T parse_scalar(std::string_view text, const std::string& where) {
  T x{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec == std::errc::result_out_of_range) {
    throw Error(ErrorCode::NonFinite, where + ": number '" + std::string(text) + "' is out of range");
  }
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Parse, where + ": '" + std::string(text) + "' is not a number");
  }
  return x;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Streams the document and keeps every number as its source text, so values
// can be converted once the dtype is known (it may appear after "pcfs") and
// f32 values are rounded once, straight from decimal.
class PcfDocumentSax : public nlohmann::json_sax<json> {
public:
  explicit PcfDocumentSax(std::string origin) : origin_(std::move(origin)) {}

  std::optional<std::string> dtype;
  std::vector<std::vector<std::string>> pcfs;

  bool null() override { fail("unexpected null"); }
  bool boolean(bool) override { fail("unexpected boolean"); }
  bool number_integer(number_integer_t v) override { return number(std::to_string(v)); }
  bool number_unsigned(number_unsigned_t v) override { return number(std::to_string(v)); }
  bool number_float(number_float_t, const string_t& s) override { return number(s); }
  bool binary(binary_t&) override { fail("unexpected binary value"); }

  bool string(string_t& s) override {
    if (ctx_ != Ctx::Top || pending_key_ != "dtype") {
      fail("unexpected string");
    }
    dtype = s;
    pending_key_.clear();
    return true;
  }

  bool start_object(std::size_t) override {
    if (ctx_ != Ctx::Root) {
      fail("unexpected object");
    }
    ctx_ = Ctx::Top;
    return true;
  }

  bool key(string_t& k) override {
    if (k != "dtype" && k != "pcfs") {
      fail("unknown key '" + k + "'");
    }
    pending_key_ = k;
    return true;
  }

  bool end_object() override {
    ctx_ = Ctx::Done;
    return true;
  }

  bool start_array(std::size_t) override {
    switch (ctx_) {
    case Ctx::Top:
      if (pending_key_ != "pcfs") {
        fail("unexpected array");
      }
      pending_key_.clear();
      ctx_ = Ctx::Pcfs;
      return true;
    case Ctx::Pcfs:
      pcfs.emplace_back();
      row_ = 0;
      ctx_ = Ctx::Pcf;
      return true;
    case Ctx::Pcf:
      row_len_ = 0;
      ctx_ = Ctx::Row;
      return true;
    default:
      fail("unexpected array");
    }
  }

  bool end_array() override {
    switch (ctx_) {
    case Ctx::Row:
      if (row_len_ != 2) {
        fail(where() + ": a row needs exactly two numbers [t, v]");
      }
      ++row_;
      ctx_ = Ctx::Pcf;
      return true;
    case Ctx::Pcf:
      ctx_ = Ctx::Pcfs;
      return true;
    default:
      ctx_ = Ctx::Top;
      return true;
    }
  }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) override {
    throw Error(ErrorCode::Parse, origin_ + ": " + ex.what());
  }

private:
  enum class Ctx { Root, Top, Pcfs, Pcf, Row, Done };

  bool number(std::string text) {
    if (ctx_ != Ctx::Row || row_len_ >= 2) {
      fail(ctx_ == Ctx::Row ? where() + ": a row needs exactly two numbers [t, v]" : "unexpected number");
    }
    pcfs.back().push_back(std::move(text));
    ++row_len_;
    return true;
  }

  std::string where() const {
    return "pcf " + std::to_string(pcfs.size() - 1) + " row " + std::to_string(row_);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::Parse, origin_ + ": " + msg); }

  std::string origin_;
  Ctx ctx_ = Ctx::Root;
  std::string pending_key_;
  std::size_t row_ = 0;
  std::size_t row_len_ = 0;
};

template <Scalar T>
Pcf<T> build_pcf(const std::vector<std::string>& numbers, std::size_t index, const std::string& origin) {
  typename Pcf<T>::Buffer buf;
  buf.reserve(numbers.size());
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    buf.push_back(parse_scalar<T>(numbers[i], origin + ": pcf " + std::to_string(index) + " row " +
                                                  std::to_string(i / 2)));
  }
  try {
    return Pcf<T>::from_interleaved(std::move(buf));
  } catch (const Error& e) {
    std::string msg = origin + ": pcf " + std::to_string(index);
    if (e.row()) {
      msg += " row " + std::to_string(*e.row());
    }
    Error wrapped(e.code(), msg + ": " + e.detail());
    if (e.row()) {
      wrapped.with_row(*e.row());
    }
    throw wrapped;
  }
}

} // namespace

std::vector<AnyPcf> parse_json(std::string_view text, const std::string& origin) {
  PcfDocumentSax sax(origin);
  json::sax_parse(text, &sax);
  const std::string dtype = sax.dtype.value_or("f64");
  if (dtype != "f32" && dtype != "f64") {
    throw Error(ErrorCode::Parse, origin + ": dtype must be \"f32\" or \"f64\", got \"" + dtype + "\"");
  }
  std::vector<AnyPcf> out;
  out.reserve(sax.pcfs.size());
  for (std::size_t k = 0; k < sax.pcfs.size(); ++k) {
    if (dtype == "f32") {
      out.emplace_back(build_pcf<float>(sax.pcfs[k], k, origin));
    } else {
      out.emplace_back(build_pcf<double>(sax.pcfs[k], k, origin));
    }
  }
  return out;
}

Pcf64 parse_csv(std::string_view text, const std::string& origin) {
  typename Pcf64::Buffer buf;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  std::vector<std::size_t> row_lines;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = text.size();
    }
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::string where = origin + ":" + std::to_string(line_no);
    if (!header_seen) {
      if (line != "t,v") {
        throw Error(ErrorCode::Parse, where + ": expected header \"t,v\"");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::Parse, where + ": expected two comma-separated columns");
    }
    buf.push_back(parse_scalar<double>(trim(line.substr(0, comma)), where));
    buf.push_back(parse_scalar<double>(trim(line.substr(comma + 1)), where));
    row_lines.push_back(line_no);
  }
  if (!header_seen) {
    throw Error(ErrorCode::Empty, origin + ": empty CSV file");
  }
  try {
    return Pcf64::from_interleaved(std::move(buf));
  } catch (const Error& e) {
    std::string msg = origin;
    if (e.row() && *e.row() < row_lines.size()) {
      msg += ":" + std::to_string(row_lines[*e.row()]) + " (row " + std::to_string(*e.row()) + ")";
    }
    Error wrapped(e.code(), msg + ": " + e.detail());
    if (e.row()) {
      wrapped.with_row(*e.row());
    }
    throw wrapped;
  }
}

LoadedCollection load(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    LoadedCollection out{{}, FileKind::Csv};
    for (const auto& file : files) {
      out.pcfs.emplace_back(parse_csv(read_file(file), file.string()));
    }
    return out;
  }
  if (!fs::exists(path, ec)) {
    throw Error(ErrorCode::Parse, path.string() + ": no such file or directory");
  }
  const std::string text = read_file(path);
  if (path.extension() == ".csv") {
    return {{AnyPcf(parse_csv(text, path.string()))}, FileKind::Csv};
  }
  return {parse_json(text, path.string()), FileKind::Json};
}

void write_json(std::ostream& os, const AnyCollection& pcfs) {
  std::visit([&os](const auto& v) { write_json(os, v); }, pcfs);
}

} // namespace mpcf::io
