#include "retailsim/queuing.hpp"

#include <string>

namespace retailsim {

std::string_view to_string(ServiceNeed n) {
    switch (n.kind) {
        case NeedKind::Help: return n.required == Expertise::Expert ? "Help(Expert)" : "Help(Normal)";
        case NeedKind::Payment: return "Payment";
        case NeedKind::Refund: return "Refund";
    }
    return "?";
}

QueueClass queue_class(ServiceNeed n) {
    switch (n.kind) {
        case NeedKind::Help:
            return n.required == Expertise::Expert ? QueueClass::HelpExpert : QueueClass::HelpNormal;
        case NeedKind::Payment: return QueueClass::Payment;
        case NeedKind::Refund: return QueueClass::Refund;
    }
    return QueueClass::HelpNormal;
}

bool qualified(StaffRole role, ServiceNeed need) {
    switch (need.kind) {
        case NeedKind::Payment:
        case NeedKind::Refund: return role == StaffRole::Cashier;
        case NeedKind::Help:
            if (role == StaffRole::ExpertSeller) return true;
            return role == StaffRole::NormalSeller && need.required == Expertise::Normal;
    }
    return false;
}

std::string_view to_string(QueueDiscipline d) {
    return d == QueueDiscipline::LongestWaitFirst ? "longest_wait_first" : "need_priority";
}

std::optional<QueueDiscipline> queue_discipline_from(std::string_view s) {
    if (s == "longest_wait_first") return QueueDiscipline::LongestWaitFirst;
    if (s == "need_priority") return QueueDiscipline::NeedPriority;
    return std::nullopt;
}

std::string_view to_string(SellerSelection s) {
    return s == SellerSelection::LeastKnowledgeFirst ? "least_knowledge_first" : "longest_idle_first";
}

std::optional<SellerSelection> seller_selection_from(std::string_view s) {
    if (s == "least_knowledge_first") return SellerSelection::LeastKnowledgeFirst;
    if (s == "longest_idle_first") return SellerSelection::LongestIdleFirst;
    return std::nullopt;
}

const QueueEntry& ServiceQueues::enqueue(AgentId customer, ServiceNeed need, SimTime now,
                                         EventHandle patience) {
    if (index_.contains(customer)) {
        throw ModelBug("customer " + std::to_string(customer) + " queued twice");
    }
    const QueueClass c = queue_class(need);
    Line& line = lines_[static_cast<std::size_t>(c)];
    line.push_back(QueueEntry{customer, need, now, patience, order_++});
    index_.emplace(customer, std::make_pair(c, std::prev(line.end())));
    return line.back();
}

std::optional<QueueEntry> ServiceQueues::remove(AgentId customer) {
    auto it = index_.find(customer);
    if (it == index_.end()) return std::nullopt;
    auto [c, pos] = it->second;
    QueueEntry e = *pos;
    lines_[static_cast<std::size_t>(c)].erase(pos);
    index_.erase(it);
    return e;
}

std::optional<QueueEntry> ServiceQueues::pop(QueueClass c) {
    Line& line = lines_[static_cast<std::size_t>(c)];
    if (line.empty()) return std::nullopt;
    QueueEntry e = line.front();
    line.pop_front();
    index_.erase(e.customer);
    return e;
}

std::optional<QueueEntry> ServiceQueues::next_for(StaffRole role) {
    // Candidate classes in need-priority order.
    QueueClass candidates[2];
    std::size_t n = 0;
    switch (role) {
        case StaffRole::Cashier:
            candidates[n++] = QueueClass::Payment;
            candidates[n++] = QueueClass::Refund;
            break;
        case StaffRole::ExpertSeller:
            candidates[n++] = QueueClass::HelpExpert;
            candidates[n++] = QueueClass::HelpNormal;
            break;
        case StaffRole::NormalSeller:
            candidates[n++] = QueueClass::HelpNormal;
            break;
        case StaffRole::SectionManager:
            return std::nullopt;
    }

    std::optional<QueueClass> best;
    for (std::size_t i = 0; i < n; ++i) {
        const Line& line = lines_[static_cast<std::size_t>(candidates[i])];
        if (line.empty()) continue;
        if (discipline_ == QueueDiscipline::NeedPriority) {
            best = candidates[i];
            break;
        }
        if (!best) {
            best = candidates[i];
            continue;
        }
        const QueueEntry& cur = lines_[static_cast<std::size_t>(*best)].front();
        const QueueEntry& alt = line.front();
        if (alt.enqueued_at < cur.enqueued_at ||
            (alt.enqueued_at == cur.enqueued_at && alt.order < cur.order)) {
            best = candidates[i];
        }
    }
    if (!best) return std::nullopt;
    return pop(*best);
}

std::optional<AgentId> pick_idle(std::span<const Staff> staff, StaffRole role, SellerSelection rule) {
    const Staff* best = nullptr;
    for (const Staff& s : staff) {
        if (s.role != role || s.busy) continue;
        if (!best) {
            best = &s;
            continue;
        }
        bool better = false;
        if (rule == SellerSelection::LeastKnowledgeFirst && s.knowledge_points != best->knowledge_points) {
            better = s.knowledge_points < best->knowledge_points;
        } else if (s.idle_since != best->idle_since) {
            better = s.idle_since < best->idle_since;
        }
        if (better) best = &s;
    }
    if (!best) return std::nullopt;
    return best->id;
}

}  // namespace retailsim
