package com.example.app;

import android.net.ConnectivityManager;
import android.net.NetworkCapabilities;
import android.net.NetworkInfo;

public final class Status {
  private Status() {
  }

  public static boolean online(ConnectivityManager cm) {
    NetworkInfo info = cm.getActiveNetworkInfo();
    NetworkCapabilities caps = cm.getNetworkCapabilities(cm.getActiveNetwork());
    return info != null \&\& info.isConnected();
  }
}
