#pragma once

#include <array>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>

#include "retailsim/agents.hpp"
#include "retailsim/engine.hpp"

namespace retailsim {

enum class NeedKind : std::uint8_t { Help, Payment, Refund };

struct ServiceNeed {
    NeedKind kind = NeedKind::Help;
    Expertise required = Expertise::Normal;  // meaningful for Help only

    static ServiceNeed help(Expertise e) { return {NeedKind::Help, e}; }
    static ServiceNeed payment() { return {NeedKind::Payment, Expertise::Normal}; }
    static ServiceNeed refund() { return {NeedKind::Refund, Expertise::Normal}; }

    bool operator==(const ServiceNeed&) const = default;
};

std::string_view to_string(ServiceNeed n);

/// Queue classes: one FIFO per need variant.
enum class QueueClass : std::uint8_t { HelpNormal, HelpExpert, Payment, Refund };
inline constexpr std::size_t kQueueClassCount = 4;
QueueClass queue_class(ServiceNeed n);

/// Whether a role may serve a need on its own. Help(Expert) is reachable by
/// a normal seller only through a referral, which this table does not cover.
bool qualified(StaffRole role, ServiceNeed need);

enum class QueueDiscipline : std::uint8_t { LongestWaitFirst, NeedPriority };
std::string_view to_string(QueueDiscipline d);
std::optional<QueueDiscipline> queue_discipline_from(std::string_view s);

/// Which idle seller takes a newly arriving help request.
enum class SellerSelection : std::uint8_t { LeastKnowledgeFirst, LongestIdleFirst };
std::string_view to_string(SellerSelection s);
std::optional<SellerSelection> seller_selection_from(std::string_view s);

struct QueueEntry {
    AgentId customer = kNoAgent;
    ServiceNeed need;
    SimTime enqueued_at = 0.0;
    EventHandle patience_handle;
    std::uint64_t order = 0;  // global enqueue counter, breaks time ties
};

/// Department-wide waiting lines, one per need class. At most one live
/// entry per customer.
class ServiceQueues {
  public:
    explicit ServiceQueues(QueueDiscipline discipline = QueueDiscipline::LongestWaitFirst)
        : discipline_(discipline) {}

    QueueDiscipline discipline() const { return discipline_; }

    // Throws ModelBug if the customer already has a live entry.
    const QueueEntry& enqueue(AgentId customer, ServiceNeed need, SimTime now, EventHandle patience);
    // Removes a customer's entry (reneging). nullopt if not queued.
    std::optional<QueueEntry> remove(AgentId customer);
    bool contains(AgentId customer) const { return index_.contains(customer); }

    /// Removes and returns the entry a freed staff member of this role should
    /// serve next, or nullopt when nothing compatible waits.
    std::optional<QueueEntry> next_for(StaffRole role);

    std::size_t size(QueueClass c) const { return lines_[static_cast<std::size_t>(c)].size(); }
    std::size_t total() const { return index_.size(); }

  private:
    using Line = std::list<QueueEntry>;

    std::optional<QueueEntry> pop(QueueClass c);

    QueueDiscipline discipline_;
    std::array<Line, kQueueClassCount> lines_;
    std::unordered_map<AgentId, std::pair<QueueClass, Line::iterator>> index_;
    std::uint64_t order_ = 0;
};

/// Picks an idle staff member of the given role. Ties fall to the lower id.
std::optional<AgentId> pick_idle(std::span<const Staff> staff, StaffRole role, SellerSelection rule);

}  // namespace retailsim
