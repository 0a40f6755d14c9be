#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mda/errors.hpp"

namespace mda::ingest {

using Date = std::chrono::year_month_day;

// "YYYY-MM-DD" -> Date. Throws ParseError on anything else.
Date parse_date(const std::string& iso);
std::string format_date(const Date& d);
long days_between(const Date& from, const Date& to);  // to - from, in days

struct FilingRecord {
    std::int64_t cik = 0;
    std::string company_name;
    std::string form_type;
    Date date_filed{};
    std::string path;  // relative EDGAR document path

    // Accession key derived from the document path, used for cache files
    // and as half of the dataset join key.
    std::string accession() const;
};

struct RawFiling {
    FilingRecord record;
    std::string body;
    std::chrono::system_clock::time_point fetched_at{};
    std::size_t byte_length = 0;
};

enum class Chapter { kChapter7 = 7, kChapter11 = 11 };

struct BankruptcyEvent {
    std::int64_t cik = 0;
    Date filing_date{};  // petition date
    Chapter chapter = Chapter::kChapter11;
};

struct Label {
    int value = 0;             // 1 = bankrupt within horizon
    int horizon_days = 365;
};

struct IndexParseResult {
    std::vector<FilingRecord> records;
    std::size_t header_lines = 0;
    std::size_t skipped_lines = 0;
    std::size_t total_lines = 0;
};

// Parse one EDGAR quarterly master index (pipe-delimited records after a
// header block). Keeps records whose form type equals `form_filter`;
// malformed lines are counted, not fatal. Throws EmptyIndex when the input
// has no data lines at all.
IndexParseResult parse_master_index(const std::string& index_text,
                                    const std::string& form_filter = "10-K");

// Label file rows: cik,petition_date,chapter (one header line).
std::vector<BankruptcyEvent> load_bankruptcy_labels(const std::string& label_text);

// Label = 1 iff an event with the same CIK has its petition date strictly
// after date_filed and within horizon_days of it.
std::vector<std::pair<FilingRecord, Label>> label_filings(
    const std::vector<FilingRecord>& filings,
    const std::vector<BankruptcyEvent>& events, int horizon_days = 365);

// ---------------------------------------------------------------------------
// Fetching. Transport and clock are injectable so the cache, retry, and
// rate-limit behavior is testable without the network.

struct HttpResponse {
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    // `path` is relative to the EDGAR archive root.
    virtual HttpResponse get(const std::string& path) = 0;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;               // seconds, monotonic
    virtual void sleep_until(double t) = 0;
};

class SystemClock final : public Clock {
public:
    double now() override;
    void sleep_until(double t) override;
};

// HTTPS transport against www.sec.gov with a mandatory User-Agent.
class EdgarTransport final : public Transport {
public:
    explicit EdgarTransport(std::string user_agent, std::string host = "www.sec.gov");
    HttpResponse get(const std::string& path) override;

private:
    std::string user_agent_;
    std::string host_;
};

// Shared token source: one permit every 1/rate seconds, regardless of how
// many threads are fetching.
class RateLimiter {
public:
    RateLimiter(double requests_per_second, Clock& clock);
    void acquire();

private:
    double interval_;
    double next_allowed_;
    Clock& clock_;
};

struct FetchOptions {
    double rate_limit = 10.0;  // requests per second
    int max_attempts = 3;
    double backoff_initial = 0.5;  // seconds, doubled per retry
};

class FilingFetcher {
public:
    FilingFetcher(std::filesystem::path cache_dir, FetchOptions options,
                  Transport& transport, Clock& clock);

    // Cached body when present (no network); otherwise fetch, write the
    // cache atomically, and return. Throws NotFound on 404, TransportError
    // after max_attempts network failures.
    RawFiling fetch(const FilingRecord& record);

    std::filesystem::path cache_path(const FilingRecord& record) const;

private:
    std::filesystem::path cache_dir_;
    FetchOptions options_;
    Transport& transport_;
    Clock& clock_;
    RateLimiter limiter_;
};

// write-temp-then-rename
void atomic_write(const std::filesystem::path& target, const std::string& content);

}  // namespace mda::ingest
