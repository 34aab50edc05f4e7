#include "linespec/signal_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace linespec::io {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw std::runtime_error("csv: bad number '" + t + "' on line " + std::to_string(line));
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

void write_signal_csv(std::ostream& out, const ComplexSignal& signal) {
    out << "re,im\n";
    for (std::size_t i = 0; i < signal.size(); ++i)
        out << format_double(signal[i].real()) << ',' << format_double(signal[i].imag()) << '\n';
}

ComplexSignal read_signal_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "re,im")
        throw std::runtime_error("csv: expected header 're,im'");
    std::vector<cplx> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("csv: missing comma on line " + std::to_string(line_no));
        samples.emplace_back(parse_double(line.substr(0, comma), line_no),
                             parse_double(line.substr(comma + 1), line_no));
    }
    if (samples.empty()) throw std::runtime_error("csv: no samples");
    return ComplexSignal(CVector::Map(samples.data(), static_cast<Eigen::Index>(samples.size())));
}

nlohmann::json vector_to_json(const CVector& v) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

CVector vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::runtime_error("json: expected an array of [re, im] pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& pair = j[i];
        if (!pair.is_array() || pair.size() != 2)
            throw std::runtime_error("json: sample " + std::to_string(i) + " is not [re, im]");
        v(static_cast<Eigen::Index>(i)) = cplx(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
}

nlohmann::json signal_to_json(const ComplexSignal& signal) {
    return {{"n", signal.size()}, {"samples", vector_to_json(signal.samples())}};
}

ComplexSignal signal_from_json(const nlohmann::json& j) {
    ComplexSignal s(vector_from_json(j.at("samples")));
    if (j.contains("n") && j.at("n").get<std::size_t>() != s.size())
        throw std::runtime_error("json: 'n' disagrees with sample count");
    return s;
}

ComplexSignal load_signal(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    if (path.extension() == ".json") return signal_from_json(nlohmann::json::parse(in));
    return read_signal_csv(in);
}

void save_signal(const std::filesystem::path& path, const ComplexSignal& signal) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (path.extension() == ".json")
        out << signal_to_json(signal).dump(2) << '\n';
    else
        write_signal_csv(out, signal);
}

}  // namespace linespec::io
