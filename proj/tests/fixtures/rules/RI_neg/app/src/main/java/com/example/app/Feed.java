package com.example.app;

import android.content.Context;
import android.net.ConnectivityManager;
import android.util.Log;
import com.android.volley.Request;
import com.android.volley.RequestQueue;
import com.android.volley.toolbox.StringRequest;
import com.android.volley.toolbox.Volley;

public class Feed {
  public void load(Context context, ConnectivityManager cm, String url) {
    if (!Net.ready(cm)) {
      return;
    }
    RequestQueue queue = Volley.newRequestQueue(context);
    StringRequest request = new StringRequest(Request.Method.GET, url,
        response -> {
          if (response == null) {
            return;
          }
          show(response);
        },
        error -> {
          if (error.networkResponse != null && error.networkResponse.statusCode == 503) {
            Log.w("Feed", "service unavailable");
          }
        });
    queue.add(request);
  }

  private void show(String text) {
  }
}
