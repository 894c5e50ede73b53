package com.example.glance;

import android.service.notification.NotificationListenerService;
import android.service.notification.StatusBarNotification;

/** Receives posted notifications and shows them on the lock screen. */
public class NotificationListener extends NotificationListenerService {
    private boolean hideContent;

    @Override
    public void onNotificationPosted(StatusBarNotification sbn) {
        NotificationPresenter.get().show(sbn, hideContent);
    }

    /** Removes a notification the user swiped away. */
    @Override
    public void onNotificationRemoved(StatusBarNotification sbn) {
        NotificationPresenter.get().dismiss(sbn);
    }
}
