#include "primpoint/report.hpp"

#include <cstdio>

namespace primpoint {

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string report_csv_header() { return "q,p,n,poly,method,count,main_term,deviation,bound,holds,elapsed_ms"; }

std::string emit_report(const CountReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) {
        std::string s = "{";
        s += "\"q\":" + std::to_string(r.q);
        s += ",\"p\":" + std::to_string(r.p);
        s += ",\"n\":" + std::to_string(r.n);
        s += ",\"poly\":\"" + json_escape(r.poly) + "\"";
        s += ",\"method\":\"" + json_escape(r.method) + "\"";
        s += ",\"count\":" + std::to_string(r.count);
        s += ",\"main_term\":" + format_sig12(r.main_term);
        s += ",\"deviation\":" + format_sig12(r.deviation);
        s += ",\"bound\":" + (r.bound ? format_sig12(*r.bound) : "null");
        s += ",\"holds\":" + std::string(r.holds ? (*r.holds ? "true" : "false") : "null");
        s += ",\"elapsed_ms\":" + format_sig12(r.elapsed_ms);
        s += "}";
        return s;
    }
    std::string poly = r.poly;
    bool quote = poly.find(',') != std::string::npos || poly.find('"') != std::string::npos;
    if (quote) {
        std::string esc;
        for (char c : poly) {
            if (c == '"') esc += '"';
            esc += c;
        }
        poly = "\"" + esc + "\"";
    }
    std::string s;
    s += std::to_string(r.q) + "," + std::to_string(r.p) + "," + std::to_string(r.n) + ",";
    s += poly + "," + r.method + "," + std::to_string(r.count) + ",";
    s += format_sig12(r.main_term) + "," + format_sig12(r.deviation) + ",";
    s += (r.bound ? format_sig12(*r.bound) : "") + ",";
    s += (r.holds ? (*r.holds ? "true" : "false") : "");
    s += "," + format_sig12(r.elapsed_ms);
    return s;
}

}  // namespace primpoint
